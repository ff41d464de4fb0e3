"""Weighting schemes and the exponential-scaling pipeline.

Three families of weights for ``||x||_W``: trapezoid (Hankel multiplicities of
the length-``n`` embedding, so the weighted norm equals a Frobenius norm),
uniform, and exponential ``w_i = exp(alpha * i)``.

Exponential weights are tied to artificial damping: minimising
``||H(p_sc)||_*`` with ``p_sc,k = p_k exp(-k alpha / 2)`` under a uniform ball
is the same problem as an exponentially weighted ball in the scaled variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import HankelShape, WeightVector, multiplicities
from .errors import NumericalOverflowError, PreconditionError, ShapeError
from .solver import Ball, ProblemSpec, SolverConfig, SolverResult, solve

_MAX_EXP = math.log(np.finfo(np.float64).max) - 1.0


@dataclass(frozen=True)
class Trapezoid:
    """Multiplicities of the ``L x (n - L + 1)`` embedding of the known values."""


@dataclass(frozen=True)
class Uniform:
    """All weights equal to one."""


@dataclass(frozen=True)
class Exponential:
    """``w_i = exp(alpha * i)``; ``alpha > 0`` favours recent observations."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise PreconditionError(f"alpha must be finite, got {self.alpha}")


@dataclass(frozen=True)
class Custom:
    """Explicit strictly positive weights."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        WeightVector(np.asarray(vals))
        object.__setattr__(self, "values", vals)


WeightSpec = Trapezoid | Uniform | Exponential | Custom


def parse_weight_spec(name, alpha=0.05):
    """Map a CLI name (``trapezoid``, ``uniform``, ``exp``) to a :data:`WeightSpec`."""
    key = name.lower()
    if key in ("trapezoid", "w1"):
        return Trapezoid()
    if key in ("uniform", "w2"):
        return Uniform()
    if key in ("exp", "exponential", "w3"):
        return Exponential(alpha)
    raise ValueError(f"unknown weighting scheme {name!r}")


def scheme_label(spec):
    return {Trapezoid: "W1", Uniform: "W2", Exponential: "W3", Custom: "custom"}[type(spec)]


def trapezoid_weights(n, L):
    """Trapezoid weights for the length-``n`` embedding with window ``L``."""
    if not 1 <= L <= n:
        raise PreconditionError(f"trapezoid weights need 1 <= L <= n, got L={L}, n={n}")
    return multiplicities(L, n - L + 1)


def full_matrix_multiplicities(shape: HankelShape):
    """Custom weights: multiplicities of ``p_1..p_n`` in the full ``L x K`` matrix."""
    return Custom(tuple(multiplicities(shape.L, shape.K)[: shape.n]))


def build_weights(spec, n, L=None):
    """Realise ``spec`` as a :class:`WeightVector` of length ``n``."""
    if isinstance(spec, Trapezoid):
        if L is None:
            raise PreconditionError("trapezoid weights need the window length L")
        w = trapezoid_weights(n, L)
    elif isinstance(spec, Uniform):
        w = np.ones(n)
    elif isinstance(spec, Exponential):
        if abs(spec.alpha) * n > _MAX_EXP:
            raise NumericalOverflowError(f"exp(alpha * n) overflows for alpha={spec.alpha}, n={n}")
        w = np.exp(spec.alpha * np.arange(1, n + 1))
    elif isinstance(spec, Custom):
        if len(spec.values) != n:
            raise ShapeError(f"custom weights have length {len(spec.values)}, expected {n}")
        w = np.asarray(spec.values)
    else:
        raise TypeError(f"not a weight spec: {spec!r}")
    return WeightVector(w)


def _damping(N, alpha, sign):
    k = np.arange(1, N + 1)
    if abs(alpha) * N / 2 > _MAX_EXP:
        raise NumericalOverflowError(
            f"exp({sign}k alpha/2) leaves double range for alpha={alpha}, length {N}"
        )
    return np.exp(sign * k * alpha / 2.0)


def scale_series(p, alpha):
    """``p_k * exp(-k alpha / 2)``, ``k = 1..len(p)``."""
    p = np.asarray(p, dtype=np.float64)
    out = p * _damping(p.shape[0], alpha, -1.0)
    if not np.all(np.isfinite(out)):
        raise NumericalOverflowError("scaled series is not finite")
    return out


def unscale_series(p_sc, alpha):
    """Inverse of :func:`scale_series`: ``p_sc,k * exp(+k alpha / 2)``."""
    p_sc = np.asarray(p_sc, dtype=np.float64)
    out = p_sc * _damping(p_sc.shape[0], alpha, 1.0)
    if not np.all(np.isfinite(out)):
        raise NumericalOverflowError("unscaled series is not finite")
    return out


def solve_via_scaling(p0, shape: HankelShape, alpha, tau, config=SolverConfig(), **kwargs) -> SolverResult:
    """Scaled-structure completion by damping, weighted solve, undamping.

    1. damp ``p0`` to ``p_sc,0``;
    2. solve the plain-structure ball problem in the damped variable with
       weights ``exp(alpha i)`` and budget ``tau``;
    3. undamp the whole length-``n + m`` solution.

    ``singular_values`` / ``nuclear_norm`` of the result describe ``H(p_sc)``,
    the objective of the scaled-structure problem.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    p_sc0 = scale_series(p0, alpha)
    # damping range check for the full window (also guards the undamping step)
    _damping(shape.total, alpha, 1.0)
    w3 = build_weights(Exponential(alpha), shape.n)
    init = kwargs.pop("init", None)
    if init is not None:
        init = scale_series(init, alpha)
    problem = ProblemSpec(p0=p_sc0, shape=shape, weights=w3, mode=Ball(tau), init=init, **kwargs)
    res = solve(problem, config)
    return replace(res, completed=unscale_series(res.completed, alpha))


def solve_scaled_structure(p0, shape: HankelShape, alpha, tau, config=SolverConfig(), **kwargs) -> SolverResult:
    """Directly minimise ``||H(p_sc)||_*`` s.t. ``||p_(1:n) - p0||_2 <= tau``.

    The variable stays unscaled; the damping enters the structure map instead.
    Mathematically identical to :func:`solve_via_scaling`.
    """
    d = _damping(shape.total, alpha, -1.0)
    problem = ProblemSpec(p0=p0, shape=shape, weights=np.ones(shape.n), mode=Ball(tau), scale=d, **kwargs)
    return solve(problem, config)
