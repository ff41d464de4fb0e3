"""Finite-rank series, linear recurrent formulae and minimal-rank completion.

A series of finite rank ``r`` has the parametric form

    p_k = sum_j P_j(k) * lambda_j**k,        k = 1, 2, ...

with ``deg P_j = nu_j - 1`` and ``r = sum_j nu_j``. It satisfies the order-``r``
recurrence ``p_{k+r} = -sum_{j<r} q_j p_{k+j}`` whose coefficients are those of
``prod_j (z - lambda_j)**nu_j``. Continuing the known values with this
recurrence gives the unique minimal-rank Hankel completion.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import HankelShape, embed
from .errors import (
    DegenerateModelError,
    InvalidModelError,
    NumericalOverflowError,
    PreconditionError,
    ShapeError,
)

OVERFLOW_LIMIT = 1e300
IMAG_TOL = 1e-10
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class ExponentialModel:
    """Sum of polynomial-modulated complex exponentials.

    Parameters
    ----------
    terms : sequence of (lambda, coeffs)
        ``coeffs`` holds the polynomial ``P_j`` in ascending powers of ``k``.
    real : bool
        Set when roots and coefficients are closed under conjugation, so that
        evaluations are real.
    """

    terms: tuple
    real: bool = False

    def __post_init__(self):
        clean = []
        for lam, coeffs in self.terms:
            lam = complex(lam)
            coeffs = tuple(complex(c) for c in np.atleast_1d(coeffs))
            if lam == 0:
                raise InvalidModelError("roots must be nonzero")
            if not coeffs or coeffs[-1] == 0:
                raise InvalidModelError(f"leading coefficient of P for root {lam} is zero")
            clean.append((lam, coeffs))
        roots = [lam for lam, _ in clean]
        for i in range(len(roots)):
            for j in range(i):
                if abs(roots[i] - roots[j]) <= 1e-14 * max(abs(roots[i]), abs(roots[j])):
                    raise InvalidModelError(f"duplicate root {roots[i]}")
        object.__setattr__(self, "terms", tuple(clean))

    @property
    def roots(self):
        return np.array([lam for lam, _ in self.terms])

    @property
    def multiplicities(self):
        return [len(c) for _, c in self.terms]

    @property
    def rank(self):
        return sum(self.multiplicities)


@dataclass(frozen=True)
class CharPoly:
    """Monic characteristic polynomial ``z**r + q_{r-1} z**(r-1) + ... + q_0``.

    ``coefficients`` stores ``q_0, ..., q_{r-1}`` (ascending, leading 1 omitted).
    """

    coefficients: np.ndarray

    @property
    def order(self):
        return len(self.coefficients)

    def monic(self):
        """All coefficients in descending powers, leading 1 included (numpy.poly order)."""
        return np.concatenate([[1.0], self.coefficients[::-1]])


def from_real_form(periodic=(), exponential=()):
    """Convert a real trend/periodic description to an :class:`ExponentialModel`.

    Parameters
    ----------
    periodic : iterable of (rho, omega, phi, Q)
        Components ``Q(k) rho**k cos(2 pi omega k + phi)`` with ``omega`` in
        ``(0, 1/2)``. ``Q`` is a scalar or ascending coefficient sequence.
    exponential : iterable of (rho, Q)
        Components ``Q(k) rho**k``.
    """
    terms = []
    for rho, omega, phi, Q in periodic:
        if not 0.0 < omega < 0.5:
            raise InvalidModelError(f"frequency {omega} outside (0, 1/2)")
        Q = np.atleast_1d(np.asarray(Q, dtype=np.float64))
        up = rho * np.exp(2j * np.pi * omega)
        terms.append((up, np.exp(1j * phi) / 2 * Q))
        terms.append((np.conj(up), np.exp(-1j * phi) / 2 * Q))
    for rho, Q in exponential:
        Q = np.atleast_1d(np.asarray(Q, dtype=np.float64))
        terms.append((complex(rho), Q.astype(complex)))
    return ExponentialModel(tuple(terms), real=True)


def evaluate(model, k):
    """Evaluate ``p_k = sum_j P_j(k) lambda_j**k`` on the integer positions ``k``.

    A model flagged ``real`` returns a float array after checking that the
    imaginary residue is negligible.
    """
    k = np.atleast_1d(np.asarray(k))
    if k.size == 0:
        raise ShapeError("empty evaluation range")
    if np.any(k < 1) or not np.all(np.equal(np.mod(k, 1), 0)):
        raise ShapeError("evaluation positions must be positive integers")
    k = k.astype(np.float64)
    out = np.zeros(k.shape, dtype=complex)
    log_limit = math.log(OVERFLOW_LIMIT)
    for lam, coeffs in model.terms:
        poly = np.polynomial.polynomial.polyval(k, coeffs)
        with np.errstate(divide="ignore"):
            logmag = np.log(np.abs(poly)) + k * math.log(abs(lam))
        if np.any(logmag > log_limit):
            raise NumericalOverflowError(
                f"term with root {lam} exceeds {OVERFLOW_LIMIT:g} on the requested range"
            )
        out += poly * lam ** k
    if not model.real:
        return out
    scale = max(float(np.max(np.abs(out))), np.finfo(float).tiny)
    resid = float(np.max(np.abs(out.imag)))
    if resid > IMAG_TOL * scale:
        raise InvalidModelError(
            f"model flagged real has imaginary residue {resid:.3g} (relative {resid / scale:.3g})"
        )
    return out.real.copy()


def char_poly(model):
    """Characteristic polynomial ``prod_j (z - lambda_j)**nu_j`` of ``model``."""
    roots = []
    for lam, coeffs in model.terms:
        roots.extend([lam] * len(coeffs))
    monic = np.poly(roots)
    if model.real:
        monic = monic.real
    return CharPoly(np.asarray(monic[1:][::-1]))


def lrf_coefficients(p0, r):
    """Estimate the order-``r`` recurrence satisfied by ``p0``.

    The coefficient vector ``(q_0, ..., q_{r-1}, 1)`` spans (up to scale) the
    left null space of the ``(r+1)``-row Hankel matrix of ``p0``; it is taken
    as the singular vector for the smallest singular value. This is exact for
    exact finite-rank data and a total-least-squares fit otherwise.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    n = p0.shape[0]
    if r < 1:
        raise PreconditionError(f"rank must be >= 1, got {r}")
    if n < 2 * r:
        raise PreconditionError(f"need n >= 2r, got n={n}, r={r}")
    H = embed(p0, r + 1)
    _, s, vt = np.linalg.svd(H.T, full_matrices=True)
    a = vt[-1]
    lead = a[-1]
    if abs(lead) < DEGENERACY_TOL * np.linalg.norm(a):
        raise DegenerateModelError(
            "leading recurrence coefficient is numerically zero; the data has fewer than "
            f"{r} active steps"
        )
    s1 = s[0] if s.size else 0.0
    numrank = int(np.sum(s > DEGENERACY_TOL * s1)) if s1 > 0 else 0
    if numrank < r:
        warnings.warn(
            f"H_{r + 1}(p0) has numerical rank {numrank} < {r}; recurrence is not unique",
            RuntimeWarning,
            stacklevel=3,
        )
    return CharPoly(a[:-1] / lead)


def lrf_extend(p0, r, m):
    """Append ``m`` values to ``p0`` by its estimated order-``r`` recurrence.

    For exactly finite-rank data this is the unique minimal-rank completion;
    for noisy data it is a best-effort estimate.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    if m < 0:
        raise PreconditionError(f"m must be >= 0, got {m}")
    q = lrf_coefficients(p0, r).coefficients
    out = np.empty(p0.shape[0] + m)
    out[: p0.shape[0]] = p0
    n = p0.shape[0]
    for k in range(n, n + m):
        out[k] = -np.dot(q, out[k - r:k])
    if not np.all(np.isfinite(out)):
        raise NumericalOverflowError("recurrent continuation overflowed")
    return out


def estimate_rank(p0, L, tol=1e-8):
    """Number of singular values of ``H_L(p0)`` above ``tol * sigma_1``."""
    if not 0.0 < tol < 1.0:
        raise PreconditionError(f"tol must lie in (0, 1), got {tol}")
    s = np.linalg.svd(embed(p0, L), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def minimal_rank_completion(p0, shape: HankelShape, r=None):
    """Unique minimal-rank completion of the Hankel structure ``shape``.

    Parameters
    ----------
    p0 : array_like
        Known values, length ``shape.n``.
    shape : HankelShape
    r : int, optional
        Rank of the series. Estimated from ``p0`` with the most square window
        when omitted.

    Raises
    ------
    PreconditionError
        If ``r > min(L, K, n/2)``.
    """
    p0 = np.asarray(p0, dtype=np.float64)
    if p0.shape[0] != shape.n:
        raise ShapeError(f"p0 has length {p0.shape[0]}, shape expects n={shape.n}")
    if shape.m == 0:
        return p0.copy()
    if r is None:
        r = estimate_rank(p0, (shape.n + 1) // 2, tol=1e-9)
        if r == 0:
            return np.concatenate([p0, np.zeros(shape.m)])
    if r > min(shape.L, shape.K, shape.n / 2):
        raise PreconditionError(
            f"rank {r} exceeds min(L, K, n/2) = {min(shape.L, shape.K, shape.n / 2)}"
        )
    return lrf_extend(p0, r, shape.m)
