#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels, alone and inside the solver.

Usage: ``python benchmarks/bench_kernels.py [--repeat 5] [--format text|json]``

Each figure is the best of ``--repeat`` timings of a loop, in microseconds per
call (kernels) or milliseconds per solve.
"""

import argparse
import contextlib
import json
import sys
import timeit

import numpy as np

from hankelcomp import _backend, _pykernels
from hankelcomp.core import HankelShape
from hankelcomp.solver import Ball, ProblemSpec, SolverConfig, solve

try:
    from hankelcomp import _ckernels
except ImportError:  # extension not built
    _ckernels = None

NAMES = ("hankel", "antidiag_sums", "antidiag_means", "project_weighted_ball", "prox_weighted_norm")


@contextlib.contextmanager
def use(kernels):
    saved = {k: getattr(_backend, k) for k in NAMES}
    for k in NAMES:
        setattr(_backend, k, getattr(kernels, k))
    try:
        yield
    finally:
        for k, v in saved.items():
            setattr(_backend, k, v)


def kernel_cases(N, rng):
    L = N // 2
    p = rng.standard_normal(N)
    X = np.ascontiguousarray(rng.standard_normal((L, N - L + 1)))
    t, p0 = rng.standard_normal((2, N))
    a, w = rng.uniform(0.5, 3.0, (2, N))
    return {
        "hankel": lambda k: k.hankel(p, L),
        "antidiag_sums": lambda k: k.antidiag_sums(X),
        "antidiag_means": lambda k: k.antidiag_means(X),
        "project_weighted_ball": lambda k: k.project_weighted_ball(t, a, w, p0, 0.1),
        "prox_weighted_norm": lambda k: k.prox_weighted_norm(t, a, w, p0, 0.5),
    }


def best(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def run(repeat):
    rng = np.random.default_rng(0)
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    rows = []
    for N in (25, 60, 119):
        for name, fn in kernel_cases(N, rng).items():
            row = {"kind": "kernel", "name": name, "size": N}
            for label, mod in backends.items():
                row[label] = 1e6 * best(lambda: fn(mod), 2000, repeat)
            rows.append(row)
    k = np.arange(1, 61)
    p0 = np.exp(0.02 * k) * np.cos(2 * np.pi * k / 10) + 0.1 * rng.standard_normal(60)
    cfg = SolverConfig(max_iterations=2000)
    for L in (13, 30):
        prob = ProblemSpec(p0=p0, shape=HankelShape.from_window(60, 6, L), mode=Ball(0.5))
        row = {"kind": "solve", "name": "ball solve", "size": L}
        for label, mod in backends.items():
            with use(mod):
                row[label] = 1e3 * best(lambda: solve(prob, cfg), 1, repeat)
        rows.append(row)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    args = ap.parse_args(argv)
    rows = run(args.repeat)
    if args.format == "json":
        print(json.dumps(rows, indent=2))
        return 0
    if _ckernels is None:
        print("compiled kernels not built; python timings only")
    print(f"{'case':<28}{'size':>6}{'python':>12}{'cython':>12}{'speedup':>9}")
    for r in rows:
        unit = "us" if r["kind"] == "kernel" else "ms"
        c = r.get("cython")
        speed = f"{r['python'] / c:8.1f}x" if c else "      -"
        cs = f"{c:10.1f}{unit}" if c else f"{'-':>12}"
        print(f"{r['name']:<28}{r['size']:>6}{r['python']:10.1f}{unit}{cs}{speed}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
