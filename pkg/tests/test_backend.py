import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hankelcomp import _pykernels

ck = pytest.importorskip("hankelcomp._ckernels", reason="compiled kernels not built")


def test_hankel_and_antidiagonals(rng):
    for L, N in [(1, 1), (3, 7), (13, 25), (30, 100)]:
        p = rng.standard_normal(N)
        H = ck.hankel(p, L)
        np.testing.assert_array_equal(H, _pykernels.hankel(p, L))
        X = rng.standard_normal((L, N - L + 1))
        np.testing.assert_allclose(ck.antidiag_sums(X), _pykernels.antidiag_sums(X), rtol=1e-14, atol=1e-14)
        np.testing.assert_allclose(ck.antidiag_means(X), _pykernels.antidiag_means(X), rtol=1e-14, atol=1e-14)


def test_ball_projection(rng):
    for _ in range(50):
        n = int(rng.integers(1, 40))
        t, p0 = rng.standard_normal((2, n))
        a, w = rng.uniform(0.5, 5, (2, n))
        tau = float(rng.uniform(0, 2))
        x1, mu1 = ck.project_weighted_ball(t, a, w, p0, tau, 1e-12)
        x2, mu2 = _pykernels.project_weighted_ball(t, a, w, p0, tau, 1e-12)
        np.testing.assert_allclose(x1, x2, rtol=1e-10, atol=1e-12)
        assert np.sum(w * (x1 - p0) ** 2) <= tau ** 2 * (1 + 1e-10) + 1e-300


def test_prox(rng):
    for _ in range(50):
        n = int(rng.integers(1, 40))
        t, p0 = rng.standard_normal((2, n))
        a, w = rng.uniform(0.5, 5, (2, n))
        kappa = float(rng.uniform(0.01, 10))
        x1, s1 = ck.prox_weighted_norm(t, a, w, p0, kappa, 1e-12)
        x2, s2 = _pykernels.prox_weighted_norm(t, a, w, p0, kappa, 1e-12)
        np.testing.assert_allclose(x1, x2, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("env,expected", [({"HANKELCOMP_PURE_PYTHON": "1"}, "python"), ({}, "cython")])
def test_backend_selection(env, expected):
    full = {k: v for k, v in os.environ.items() if k != "HANKELCOMP_PURE_PYTHON"}
    full.update(env)
    out = subprocess.run(
        [sys.executable, "-c", "import hankelcomp; print(hankelcomp.BACKEND)"],
        capture_output=True, text=True, env=full, check=True,
    )
    assert out.stdout.strip() == expected


def test_solver_agrees_across_backends():
    code = (
        "import json, numpy as np, hankelcomp as h;"
        "p=np.cos(np.arange(1,31)/2)+0.01*np.sin(np.arange(1,31)**2);"
        "r=h.solve(h.ProblemSpec(p0=p,shape=h.HankelShape.from_window(30,4,16),mode=h.Ball(0.05)));"
        "print(json.dumps(r.completed.tolist()))"
    )
    outs = []
    for env in ({"HANKELCOMP_PURE_PYTHON": "1"}, {}):
        full = {k: v for k, v in os.environ.items() if k != "HANKELCOMP_PURE_PYTHON"}
        full.update(env)
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=full, check=True)
        outs.append(np.array(json.loads(res.stdout)))
    np.testing.assert_allclose(outs[0], outs[1], rtol=1e-8, atol=1e-10)
