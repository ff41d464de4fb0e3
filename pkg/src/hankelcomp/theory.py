"""Recovery bounds and optimality certificates for nuclear-norm completion.

For a single exponential ``p_k = c lambda**k`` and an ``L x K`` Hankel matrix
with ``m`` missing entries, the relaxation recovers the minimal-rank
completion whenever ``C(|lambda|, L, K, m) < 1``. The bound comes from an
explicit certificate supported on the lower-right ``(m+1) x (m+1)`` corner.

``certificate_check`` builds certificates numerically for any candidate
completion and reports whether they prove global optimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import HankelShape, embed
from .errors import PreconditionError, ShapeError
from .finite_rank import estimate_rank, minimal_rank_completion
from .solver import SUCCESS_THRESHOLD, Exact, ProblemSpec, SolverConfig, Status, solve

UNIT_TOL = 1e-8

PROBE_CONFIG = SolverConfig(max_iterations=20000, eps_abs=1e-12, eps_rel=1e-10)


def _log_abs_expm1(x):
    # log|exp(x) - 1| without overflow for large |x|
    if x > 0:
        return x + math.log1p(-math.exp(-x))
    return math.log(-math.expm1(x))


def _log_y(rho, L, K):
    lr = math.log(rho)
    return 0.5 * (_log_abs_expm1(-2 * L * lr) + _log_abs_expm1(-2 * K * lr))


def _check_rho(rho):
    if not (rho > 0 and math.isfinite(rho)):
        raise PreconditionError(f"rho must be finite and > 0, got {rho}")


def c_rho(rho, L, K, m):
    """Certificate norm ``C(rho, L, K, m)``; recovery is guaranteed when it is < 1.

    Within ``|rho - 1| < 1e-8`` the ``rho = 1`` branch ``(m+1)/sqrt(LK)`` is used.
    """
    _check_rho(rho)
    if not 0 <= m < min(L, K):
        raise PreconditionError(f"need 0 <= m < min(L, K), got m={m}, L={L}, K={K}")
    if abs(rho - 1.0) < UNIT_TOL:
        return (m + 1) / math.sqrt(L * K)
    z = (m + 1) * abs(math.log(rho))
    # log(2 sinh z) = z + log(1 - exp(-2z))
    log_num = z + math.log1p(-math.exp(-2 * z))
    return math.exp(log_num - _log_y(rho, L, K))


@dataclass(frozen=True)
class MissingBound:
    """Largest number of missing values with guaranteed recovery.

    ``bound`` is the real bound on ``m + 1`` (strict inequality). ``max_m`` is
    the largest integer ``m`` satisfying it (``-1`` if none). ``admissible_max``
    additionally respects ``m < min(L, K)``.
    """

    bound: float
    max_m: int
    admissible_max: int


def max_missing(rho, L, K):
    """Largest ``m`` with ``m + 1`` strictly below the recovery bound."""
    _check_rho(rho)
    if abs(rho - 1.0) < UNIT_TOL:
        bound = math.sqrt(L * K)
    else:
        # log_rho((sqrt(y^2+4) +/- y)/2) = asinh(y/2) / |log rho| on the matching branch
        ly = _log_y(rho, L, K)
        ash = math.asinh(math.exp(ly) / 2) if ly < 700 else ly
        bound = ash / abs(math.log(rho))
    max_m = max(math.ceil(bound) - 2, -1)
    return MissingBound(bound=bound, max_m=max_m, admissible_max=min(max_m, min(L, K) - 1))


def optimal_window(total, m=0):
    """Window length making the ``L x K`` matrix square (or as close as possible).

    Returns ``ceil((total + 1) / 2)``; ``L = K`` when ``total`` is odd.
    """
    if total < 2:
        raise PreconditionError(f"total length must be >= 2, got {total}")
    L = (total + 2) // 2
    K = total - L + 1
    if m >= min(L, K):
        raise PreconditionError(f"m={m} leaves no admissible window for total length {total}")
    return L


@dataclass(frozen=True)
class RankOneCertificate:
    """Explicit certificate for ``p_k = c lambda**k``.

    ``spectral_norm`` is the closed form ``(sigma'/sigma) |rho|**(m+1)``;
    ``matrix_norm`` is the spectral norm of ``matrix`` computed numerically.
    They agree for ``m >= 1``; for ``m = 0`` there is no constraint and the
    explicit matrix is zero.
    """

    matrix: np.ndarray
    spectral_norm: float
    matrix_norm: float
    sigma: float
    sigma_prime: float


def _sum_pow2(rho, count):
    # sum_{i<count} rho^(2i)
    if abs(rho - 1.0) < UNIT_TOL:
        return float(count)
    return abs(rho ** (2 * count) - 1.0) / abs(rho * rho - 1.0)


def rank_one_certificate(c, lam, shape: HankelShape) -> RankOneCertificate:
    """Certificate for the rank-one completion of ``p_k = c lam**k``.

    The corner block ``X'`` (last ``m+1`` rows/columns) of ``S(p)`` is rank one,
    ``X' = c lam**(n-m) y y^T`` with ``y = (1, lam, .., lam**m)``. Its
    certificate ``W'`` is Hankel: the ``m`` missing antidiagonals cancel those
    of ``B' = u' v'^H`` entrywise and the remaining ones are fixed by
    ``W' conj(y) = 0``. The full certificate is ``(sigma'/sigma) W'`` embedded
    in the corner.
    """
    L, K, n, m = shape.L, shape.K, shape.n, shape.m
    if m >= min(L, K):
        raise PreconditionError(f"need m < min(L, K), got m={m}, L={L}, K={K}")
    lam = complex(lam)
    c = complex(c)
    if lam == 0 or c == 0:
        raise PreconditionError("c and lambda must be nonzero")
    rho = abs(lam)

    sigma = abs(c) * rho * math.sqrt(_sum_pow2(rho, L) * _sum_pow2(rho, K))
    y2 = _sum_pow2(rho, m + 1)
    sigma_prime = abs(c) * rho ** (n - m) * y2
    scale = sigma_prime / sigma
    closed = scale * rho ** (m + 1)

    s = m + 1
    lead = c * lam ** (n - m)
    phase = lead / abs(lead)
    h = np.zeros(2 * s - 1, dtype=complex)
    lam_pow = lam ** np.arange(2 * s - 1)
    h[s:] = -phase * lam_pow[s:] / y2
    conj_pow = np.conj(lam) ** np.arange(1, s)
    for i in range(s - 1, -1, -1):
        h[i] = -np.dot(h[i + 1:i + s], conj_pow)
    idx = np.arange(s)
    block = h[idx[:, None] + idx[None, :]]

    M = np.zeros((L, K), dtype=complex)
    M[L - s:, K - s:] = scale * block
    if np.isrealobj(lam) or (lam.imag == 0 and c.imag == 0):
        M = M.real
    matrix_norm = float(np.linalg.norm(M, 2)) if m > 0 else 0.0
    return RankOneCertificate(
        matrix=M, spectral_norm=closed, matrix_norm=matrix_norm, sigma=sigma, sigma_prime=sigma_prime
    )


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of :func:`certificate_check`.

    ``verdict`` is ``certified-unique`` (norm < 1), ``certified`` (norm <= 1
    within tolerance) or ``inconclusive``. The check is sufficient only: an
    inconclusive verdict does not prove the candidate suboptimal.
    """

    spectral_norm: float
    constraint_residual: float
    verdict: str
    rank: int
    method: str
    certificate: Optional[np.ndarray]
    frobenius_certificate_norm: float
    hankel_certificate_norm: Optional[float]

    @property
    def certified(self):
        return self.verdict in ("certified-unique", "certified")


def _basis(L, K, k):
    # 0-based antidiagonal index k of an L x K matrix
    S = np.zeros((L, K))
    i = np.arange(max(0, k - K + 1), min(L, k + 1))
    S[i, k - i] = 1.0
    return S


def _antidiag_sum(X, k):
    L, K = X.shape
    i = np.arange(max(0, k - K + 1), min(L, k + 1))
    return float(np.sum(X[i, k - i]))


def _hankel_corner_certificate(B, U, V, shape):
    """Hankel certificate on the ``(m+1)``-corner, or None if inconsistent."""
    L, K, n, m = shape.L, shape.K, shape.n, shape.m
    N = shape.total
    s = m + 1
    h_fixed = np.array([-_antidiag_sum(B, k) / (N - k) for k in range(n, N)])
    Ul = U[L - s:]
    Vl = V[K - s:]
    idx = np.arange(s)
    tsum = idx[:, None] + idx[None, :]
    rows = []
    rhs = []
    fixed_block = np.zeros((s, s))
    for t in range(s, 2 * s - 1):
        fixed_block[tsum == t] = h_fixed[t - s]
    for t in range(s):
        E = (tsum == t).astype(float)
        rows.append(np.concatenate([(Ul.T @ E).ravel(), (E @ Vl).ravel()]))
    A = np.array(rows).T
    rhs = -np.concatenate([(Ul.T @ fixed_block).ravel(), (fixed_block @ Vl).ravel()])
    head, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    block = fixed_block.copy()
    for t in range(s):
        block[tsum == t] = head[t]
    W = np.zeros((L, K))
    W[L - s:, K - s:] = block
    return W


def certificate_check(candidate, shape: HankelShape, numerical_rank_tol=1e-8, gap=1e3, tol=1e-6):
    """Try to certify ``candidate`` as the global minimiser of the exact problem.

    Two certificates are built: the minimum-Frobenius-norm solution of the
    linear conditions (pseudoinverse over all ``L x K`` matrices) and a Hankel
    certificate supported on the ``(m+1)``-corner. The valid one with the
    smaller spectral norm is reported.
    """
    candidate = np.asarray(candidate, dtype=np.float64)
    if candidate.shape != (shape.total,):
        raise ShapeError(f"candidate must have length n + m = {shape.total}")
    L, K, n, m = shape.L, shape.K, shape.n, shape.m
    X = embed(candidate, L)
    U, s, Vt = np.linalg.svd(X)
    if s[0] == 0.0:
        return CertificateReport(math.inf, math.inf, "inconclusive", 0, "none", None, math.inf, None)
    r = int(np.sum(s > numerical_rank_tol * s[0]))
    if r < s.shape[0] and s[r] > 0 and s[r - 1] / s[r] < gap:
        return CertificateReport(math.inf, math.inf, "inconclusive", r, "none", None, math.inf, None)
    U = U[:, :r]
    V = Vt[:r].T
    B = U @ V.T
    if m == 0:
        return CertificateReport(0.0, 0.0, "certified-unique", r, "empty", np.zeros((L, K)), 0.0, 0.0)

    Q1 = np.eye(L) - U @ U.T
    Q2 = np.eye(K) - V @ V.T
    N = shape.total
    A = np.array([(Q1 @ _basis(L, K, k) @ Q2).ravel() for k in range(n, N)])
    b = np.array([_antidiag_sum(B, k) for k in range(n, N)])
    M = -(np.linalg.pinv(A, rcond=1e-10) @ b).reshape(L, K)
    bnorm = float(np.linalg.norm(B))
    res_tol = 1e-8 * bnorm

    def assess(W):
        W = Q1 @ W @ Q2
        resid = max(abs(_antidiag_sum(W + B, k)) for k in range(n, N))
        return W, float(np.linalg.norm(W, 2)), resid

    W_f, norm_f, res_f = assess(M)
    options = [(norm_f, res_f, "min-frobenius", W_f)]
    norm_h = None
    W_h = _hankel_corner_certificate(B, U, V, shape)
    orth = max(float(np.linalg.norm(U.T @ W_h)), float(np.linalg.norm(W_h @ V)))
    if orth <= res_tol:
        W_h, norm_h, res_h = assess(W_h)
        options.append((norm_h, res_h, "hankel-corner", W_h))
    valid = [o for o in options if o[1] <= res_tol] or options
    norm, resid, method, W = min(valid, key=lambda o: o[0])

    if resid <= res_tol and norm < 1.0 - tol:
        verdict = "certified-unique"
    elif resid <= res_tol and norm <= 1.0 + tol:
        verdict = "certified"
    else:
        verdict = "inconclusive"
    return CertificateReport(norm, resid, verdict, r, method, W, norm_f, norm_h)


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of :func:`success_probe`; truthy iff the relaxation recovered the completion."""

    success: bool
    distance: float
    iteration_limited: bool
    iterations: int
    rank: int

    def __bool__(self):
        return self.success


def success_probe(true_series, shape: HankelShape, config: SolverConfig = PROBE_CONFIG, rank=None):
    """Does exact-mode nuclear-norm completion recover the minimal-rank completion?

    Success means converged and ``||S(p_hat) - S(p_tilde)||_F <= 1e-4``. A run
    stopped by the iteration limit is reported as a failure with
    ``iteration_limited`` set.
    """
    true_series = np.asarray(true_series, dtype=np.float64)
    if true_series.shape != (shape.total,):
        raise ShapeError(f"true series must have length {shape.total}")
    p0 = true_series[: shape.n]
    if rank is None:
        rank = estimate_rank(true_series, (shape.total + 1) // 2, tol=1e-9)
    reference = minimal_rank_completion(p0, shape, rank)
    res = solve(ProblemSpec(p0=p0, shape=shape, mode=Exact(), rank_hint=rank), config)
    dist = float(np.linalg.norm(embed(res.completed, shape.L) - embed(reference, shape.L)))
    limited = res.status is Status.ITERATION_LIMIT
    return ProbeResult(
        success=(not limited) and res.status is Status.CONVERGED and dist <= SUCCESS_THRESHOLD,
        distance=dist,
        iteration_limited=limited,
        iterations=res.iterations,
        rank=rank,
    )
