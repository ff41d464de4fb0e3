"""Property-based checks of the algebraic invariants."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import pytest

from hankelcomp import _pykernels
from hankelcomp.core import adjoint_sum, diagonal_average, embed, multiplicities, weighted_norm
from hankelcomp.theory import c_rho, max_missing
from hankelcomp.weights import Exponential, Trapezoid, build_weights, scale_series, unscale_series

try:
    from hankelcomp import _ckernels
except ImportError:  # extension not built
    _ckernels = None

KERNELS = [pytest.param(_pykernels, id="python"),
           pytest.param(_ckernels, id="cython", marks=pytest.mark.skipif(_ckernels is None, reason="not built"))]

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False, allow_subnormal=False)


@st.composite
def series_and_window(draw, min_len=1, max_len=40):
    N = draw(st.integers(min_len, max_len))
    L = draw(st.integers(1, N))
    p = draw(arrays(np.float64, N, elements=finite))
    return p, L


@given(series_and_window())
def test_round_trip(data):
    p, L = data
    np.testing.assert_allclose(diagonal_average(embed(p, L)), p, rtol=1e-14, atol=1e-12)


@given(series_and_window(), st.integers(0, 2**32 - 1))
def test_adjoint_identity(data, seed):
    p, L = data
    X = np.random.default_rng(seed).standard_normal((L, p.shape[0] - L + 1))
    lhs = float(np.sum(embed(p, L) * X))
    rhs = float(np.dot(p, adjoint_sum(X)))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, np.sum(np.abs(embed(p, L) * X)))


@given(st.integers(1, 60), st.integers(1, 60))
def test_multiplicity_sum(L, K):
    assert multiplicities(L, K).sum() == L * K


@given(series_and_window(min_len=2), st.integers(0, 2**32 - 1))
def test_trapezoid_frobenius(data, seed):
    p, L = data
    n = p.shape[0]
    p0 = np.random.default_rng(seed).standard_normal(n)
    w = np.asarray(build_weights(Trapezoid(), n, L))
    lhs = weighted_norm(p - p0, w)
    rhs = float(np.linalg.norm(embed(p, L) - embed(p0, L)))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, rhs)


@given(arrays(np.float64, st.integers(1, 30), elements=finite))
def test_uniform_norm_is_euclidean(x):
    assert abs(weighted_norm(x, np.ones_like(x)) - np.linalg.norm(x)) <= 1e-12 * max(1.0, np.linalg.norm(x))


@given(arrays(np.float64, st.integers(1, 80), elements=finite), st.floats(-0.1, 0.1))
def test_scaling_round_trip(p, alpha):
    np.testing.assert_allclose(unscale_series(scale_series(p, alpha), alpha), p, rtol=1e-14, atol=0)


@given(arrays(np.float64, st.integers(1, 60), elements=finite), st.floats(-0.1, 0.1), st.integers(0, 2**32 - 1))
def test_scaling_weights_identity(p, alpha, seed):
    n = p.shape[0]
    p0 = np.random.default_rng(seed).standard_normal(n)
    w3 = np.asarray(build_weights(Exponential(alpha), n))
    lhs = weighted_norm(scale_series(p, alpha) - scale_series(p0, alpha), w3)
    rhs = weighted_norm(p - p0, np.ones(n))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


@given(
    st.floats(0.3, 3.0),
    st.integers(1, 30),
    st.integers(1, 30),
)
def test_bound_duality(rho, L, K):
    b = max_missing(rho, L, K)
    for m in range(min(L, K)):
        c = c_rho(rho, L, K, m)
        if abs(c - 1.0) > 1e-9:
            assert (m <= b.max_m) == (c < 1.0)


@settings(max_examples=200)
@given(
    arrays(np.float64, st.integers(1, 25), elements=st.floats(-10, 10)),
    st.integers(0, 2**32 - 1),
    st.floats(0.0, 5.0),
)
@pytest.mark.parametrize("kern", KERNELS)
def test_ball_projection_optimal(kern, t, seed, tau):
    # the projection is feasible and no worse than any sampled feasible point
    rng = np.random.default_rng(seed)
    n = t.shape[0]
    a, w = rng.uniform(0.2, 5.0, (2, n))
    p0 = rng.standard_normal(n)
    x, _ = kern.project_weighted_ball(t, a, w, p0, tau, 1e-12)
    assert np.sum(w * (x - p0) ** 2) <= tau ** 2 * (1 + 1e-9) + 1e-18
    f = lambda y: float(np.sum(a * (y - t) ** 2))
    for _ in range(20):
        d = rng.standard_normal(n)
        y = p0 + d * tau * rng.uniform() / max(np.sqrt(np.sum(w * d * d)), 1e-300)
        assert f(x) <= f(y) * (1 + 1e-9) + 1e-9


@settings(max_examples=200)
@given(
    arrays(np.float64, st.integers(1, 25), elements=st.floats(-10, 10)),
    st.integers(0, 2**32 - 1),
    st.floats(0.01, 20.0),
)
@pytest.mark.parametrize("kern", KERNELS)
def test_prox_optimal(kern, t, seed, kappa):
    rng = np.random.default_rng(seed)
    n = t.shape[0]
    a, w = rng.uniform(0.2, 5.0, (2, n))
    p0 = rng.standard_normal(n)
    x, _ = kern.prox_weighted_norm(t, a, w, p0, kappa, 1e-12)
    f = lambda y: float(np.sqrt(np.sum(w * (y - p0) ** 2)) + 0.5 * kappa * np.sum(a * (y - t) ** 2))
    for _ in range(20):
        y = x + 0.1 * rng.standard_normal(n) * rng.uniform()
        assert f(x) <= f(y) + 1e-9 * max(1.0, f(y))
    assert f(x) <= f(p0) + 1e-9 * max(1.0, f(p0))
