import os

import numpy as np
from setuptools import Extension, setup

ext_kwargs = dict(
    include_dirs=[np.get_include()],
    extra_compile_args=["-O3"],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    optional=True,
)

extensions = []
if not os.environ.get("HANKELCOMP_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [Extension("hankelcomp._ckernels", ["src/hankelcomp/_ckernels.pyx"], **ext_kwargs)],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "embedsignature": True,
            },
        )

setup(ext_modules=extensions)
