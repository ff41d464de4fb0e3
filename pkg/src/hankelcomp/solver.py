"""Weighted nuclear-norm Hankel completion.

Solves, over ``p`` of length ``n + m``,

* ``Exact``:     min ||S(p)||_*  s.t.  p_(1:n) = p0
* ``Ball``:      min ||S(p)||_*  s.t.  ||p_(1:n) - p0||_W <= tau
* ``Penalized``: min ||p_(1:n) - p0||_W + gamma ||S(p)||_*

where ``S(p) = H_L(d * p)`` for an optional positive structure scaling ``d``
(``d = 1`` gives the plain Hankel structure).

The method is ADMM on the splitting ``X = S(p)``. The X-step is singular
value soft-thresholding. The p-step minimises a multiplicity-weighted
quadratic: missing entries take their antidiagonal mean, and known entries are
pinned (Exact), projected onto the weighted ball by a one-dimensional secular
equation (Ball), or mapped through the prox of the weighted norm (Penalized).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
import scipy.linalg

from . import _backend
from .core import HankelShape, WeightVector, embed, multiplicities
from .errors import PreconditionError, ShapeError

SUCCESS_THRESHOLD = 1e-4


@dataclass(frozen=True)
class Exact:
    """Known entries are pinned: ``p_(1:n) = p0``."""


@dataclass(frozen=True)
class Ball:
    """Weighted-ball constraint ``||p_(1:n) - p0||_W <= tau``."""

    tau: float

    def __post_init__(self):
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise PreconditionError(f"tau must be finite and >= 0, got {self.tau}")


@dataclass(frozen=True)
class Penalized:
    """Penalised form ``||p_(1:n) - p0||_W + gamma ||S(p)||_*``."""

    gamma: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise PreconditionError(f"gamma must be finite and > 0, got {self.gamma}")


Mode = Union[Exact, Ball, Penalized]


class Status(str, enum.Enum):
    CONVERGED = "converged"
    ITERATION_LIMIT = "iteration-limit"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolverConfig:
    """ADMM settings. Tolerances apply to the problem rescaled so ``max|p0| = 1``."""

    max_iterations: int = 5000
    rho: float = 1.0
    adaptive_rho: bool = True
    eps_abs: float = 1e-8
    eps_rel: float = 1e-6
    multiplier_tol: float = 1e-12
    relaxation: float = 1.0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise PreconditionError("max_iterations must be >= 1")
        for name in ("rho", "eps_abs", "eps_rel", "multiplier_tol"):
            if not getattr(self, name) > 0:
                raise PreconditionError(f"{name} must be > 0")
        if not 0 < self.relaxation < 2:
            raise PreconditionError("relaxation must lie in (0, 2)")


@dataclass(frozen=True)
class ProblemSpec:
    """A completion problem: data, shape, weights and constraint mode.

    ``scale`` is the optional structure scaling ``d`` (length ``n + m``).
    ``rank_hint`` and ``init`` only affect the starting point.
    """

    p0: np.ndarray
    shape: HankelShape
    weights: Optional[np.ndarray] = None
    mode: Mode = field(default_factory=Exact)
    scale: Optional[np.ndarray] = None
    rank_hint: Optional[int] = None
    init: Optional[np.ndarray] = None

    def __post_init__(self):
        p0 = np.asarray(self.p0, dtype=np.float64)
        if p0.ndim != 1 or p0.shape[0] != self.shape.n:
            raise ShapeError(f"p0 has length {p0.shape[0]}, shape expects n={self.shape.n}")
        if not np.all(np.isfinite(p0)):
            raise PreconditionError("p0 contains non-finite values")
        object.__setattr__(self, "p0", p0)
        w = np.ones(self.shape.n) if self.weights is None else np.asarray(WeightVector(self.weights))
        if w.shape[0] != self.shape.n:
            raise ShapeError(f"weights have length {w.shape[0]}, expected n={self.shape.n}")
        object.__setattr__(self, "weights", w)
        if self.scale is not None:
            d = np.asarray(self.scale, dtype=np.float64)
            if d.shape != (self.shape.total,) or np.any(~np.isfinite(d)) or np.any(d <= 0):
                raise PreconditionError("structure scaling must be positive with length n + m")
            object.__setattr__(self, "scale", d)
        if self.init is not None:
            init = np.asarray(self.init, dtype=np.float64)
            if init.shape != (self.shape.total,):
                raise ShapeError("init must have length n + m")
            object.__setattr__(self, "init", init)


@dataclass(frozen=True)
class SolverResult:
    """Completed series with diagnostics.

    ``singular_values`` and ``nuclear_norm`` refer to the objective matrix
    ``S(completed)``, which is ``embed(completed, L)`` for the plain structure.
    """

    completed: np.ndarray
    singular_values: np.ndarray
    nuclear_norm: float
    iterations: int
    primal_residual: float
    dual_residual: float
    status: Status
    n: int

    @property
    def forecast(self):
        return self.completed[self.n:]

    @property
    def converged(self):
        return self.status is Status.CONVERGED


def nuclear_norm(X):
    """Sum of singular values of ``X``."""
    return float(np.sum(_singular_values(np.asarray(X, dtype=np.float64))))


def _singular_values(X):
    try:
        return np.linalg.svd(X, compute_uv=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(X, compute_uv=False, lapack_driver="gesvd")


def _svd(X):
    try:
        return np.linalg.svd(X, full_matrices=False)
    except np.linalg.LinAlgError:
        return scipy.linalg.svd(X, full_matrices=False, lapack_driver="gesvd")


def _initial_point(problem, p0):
    if problem.init is not None:
        return np.array(problem.init, dtype=np.float64)
    n, m = problem.shape.n, problem.shape.m
    if m == 0:
        return p0.copy()
    if problem.rank_hint:
        from .finite_rank import lrf_extend

        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                ext = lrf_extend(p0, problem.rank_hint, m)
            if np.all(np.isfinite(ext)) and np.max(np.abs(ext)) < 1e6 * max(np.max(np.abs(p0)), 1.0):
                return ext
        except (ArithmeticError, ValueError):
            pass
    return np.concatenate([p0, np.full(m, p0[-1])])


def solve(problem: ProblemSpec, config: SolverConfig = SolverConfig()) -> SolverResult:
    """Solve ``problem`` by ADMM. Deterministic for fixed inputs."""
    shape = problem.shape
    L, K, n, N = shape.L, shape.K, shape.n, shape.total
    mode = problem.mode

    scale = float(np.max(np.abs(problem.p0)))
    if scale == 0.0:
        scale = 1.0
    p0 = problem.p0 / scale
    w = problem.weights
    d = np.ones(N) if problem.scale is None else problem.scale
    a = multiplicities(L, K) * d * d
    a_known = a[:n]
    if isinstance(mode, Ball):
        tau = mode.tau / scale
    if isinstance(mode, Penalized):
        gamma = mode.gamma

    if isinstance(mode, Exact):
        if problem.init is not None:
            p = np.array(problem.init, dtype=np.float64) / scale
        else:
            p = _initial_point(problem, p0)
        p[:n] = p0
    else:
        p = _initial_point(problem, p0) if problem.init is None else problem.init / scale

    rho = config.rho
    alpha = config.relaxation
    Hp = _backend.hankel(d * p, L)
    U = np.zeros((L, K))
    sqrt_lk = math.sqrt(L * K)
    status = Status.ITERATION_LIMIT
    r_norm = s_norm = math.inf
    it = 0

    for it in range(1, config.max_iterations + 1):
        Us, s, Vt = _svd(Hp - U)
        s = np.maximum(s - 1.0 / rho, 0.0)
        keep = s > 0
        X = (Us[:, keep] * s[keep]) @ Vt[keep]
        Xr = alpha * X + (1.0 - alpha) * Hp if alpha != 1.0 else X

        V = Xr + U
        t = _backend.antidiag_means(V) / d
        p_new = t
        if isinstance(mode, Exact):
            p_new[:n] = p0
        elif isinstance(mode, Ball):
            p_new[:n], _ = _backend.project_weighted_ball(
                t[:n], a_known, w, p0, tau, config.multiplier_tol
            )
        else:
            p_new[:n], _ = _backend.prox_weighted_norm(
                t[:n], a_known, w, p0, rho * gamma, config.multiplier_tol
            )
        Hp_new = _backend.hankel(d * p_new, L)
        U += Xr - Hp_new

        r_norm = float(np.linalg.norm(X - Hp_new))
        s_norm = rho * float(np.linalg.norm(Hp_new - Hp))
        p, Hp = p_new, Hp_new

        if not (math.isfinite(r_norm) and math.isfinite(s_norm)):
            status = Status.INFEASIBLE
            break
        eps_pri = sqrt_lk * config.eps_abs + config.eps_rel * max(
            float(np.linalg.norm(X)), float(np.linalg.norm(Hp))
        )
        eps_dual = sqrt_lk * config.eps_abs + config.eps_rel * rho * float(np.linalg.norm(U))
        if r_norm <= eps_pri and s_norm <= eps_dual:
            status = Status.CONVERGED
            break
        if config.adaptive_rho:
            if r_norm > 10.0 * s_norm:
                rho *= 2.0
                U *= 0.5
            elif s_norm > 10.0 * r_norm:
                rho *= 0.5
                U *= 2.0

    completed = p * scale
    if isinstance(mode, Exact):
        completed[:n] = problem.p0
    sv = _singular_values(embed(d * completed, L))
    return SolverResult(
        completed=completed,
        singular_values=sv,
        nuclear_norm=float(np.sum(sv)),
        iterations=it,
        primal_residual=r_norm * scale,
        dual_residual=s_norm * scale,
        status=status,
        n=n,
    )


def solve_series(p0, shape, mode=None, weights=None, config=SolverConfig(), **kwargs):
    """Convenience wrapper: build a :class:`ProblemSpec` and :func:`solve` it."""
    problem = ProblemSpec(p0=p0, shape=shape, weights=weights, mode=mode or Exact(), **kwargs)
    return solve(problem, config)


def calibrate_tau(p0, L, r, W=None):
    """Budget ``tau`` matching the rank-``r`` SSA approximation of ``p0``.

    Truncates the SVD of ``H_L(p0)`` at rank ``r``, diagonal-averages back to a
    series ``p_check`` and returns ``||p_check - p0||_W``. With trapezoid
    weights this is ``||H_L(p_check) - H_L(p0)||_F``, at most
    :func:`unstructured_tau` and equal to it only when the truncation is
    already Hankel.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    n = p0.shape[0]
    if not 1 <= r <= min(L, n - L + 1):
        raise PreconditionError(f"rank r={r} outside 1..min(L, n-L+1) = {min(L, n - L + 1)}")
    w = np.ones(n) if W is None else np.asarray(W, dtype=np.float64)
    if w.shape[0] != n:
        raise ShapeError(f"weights have length {w.shape[0]}, expected {n}")
    Us, s, Vt = _svd(embed(p0, L))
    X_r = (Us[:, :r] * s[:r]) @ Vt[:r]
    p_check = _backend.antidiag_means(X_r)
    diff = p_check - p0
    return float(np.sqrt(np.sum(w * diff * diff)))


def with_mode(problem: ProblemSpec, mode: Mode) -> ProblemSpec:
    return replace(problem, mode=mode)


def unstructured_tau(p0, L, r):
    """Frobenius distance from ``H_L(p0)`` to the nearest rank-``r`` matrix.

    ``sqrt(sum_{k>r} sigma_k**2)``. It bounds :func:`calibrate_tau` with
    trapezoid weights from above (diagonal averaging is a projection) and
    equals it only when the truncated matrix is already Hankel.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    n = p0.shape[0]
    if not 1 <= r <= min(L, n - L + 1):
        raise PreconditionError(f"rank r={r} outside 1..min(L, n-L+1) = {min(L, n - L + 1)}")
    s = _singular_values(embed(p0, L))
    return float(np.sqrt(np.sum(s[r:] ** 2)))
