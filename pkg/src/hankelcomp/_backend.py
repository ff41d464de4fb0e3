"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy versions in ``_pykernels`` are used. Setting the environment variable
``HANKELCOMP_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
kernels = _pykernels

if not os.environ.get("HANKELCOMP_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"

hankel = kernels.hankel
antidiag_sums = kernels.antidiag_sums
antidiag_means = kernels.antidiag_means
project_weighted_ball = kernels.project_weighted_ball
prox_weighted_norm = kernels.prox_weighted_norm
