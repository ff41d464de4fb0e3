"""Hankel-matrix algebra shared by every other module.

Indices in the public contract are 1-based (``p_1 .. p_{L+K-1}``); arrays are
stored 0-based internally. All functions are pure and accept any array-like,
including :class:`TimeSeries`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import PreconditionError, ShapeError


def _as_vector(x, name="series"):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered, finite real observations ``p_1, ..., p_N``.

    Parameters
    ----------
    values : array_like
        At least two finite reals.
    origin : str, optional
        Free-text provenance label; metadata only.
    """

    values: np.ndarray
    origin: str = ""

    def __post_init__(self):
        arr = _as_vector(self.values, "values").copy()
        if arr.shape[0] < 2:
            raise ShapeError(f"a time series needs at least 2 values, got {arr.shape[0]}")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
            raise ValueError(f"non-finite value at position {bad}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.values
        return self.values.astype(dtype)

    def head(self, n):
        """The first ``n`` values, ``p_(1:n)``, as a plain array."""
        return self.values[:n]


@dataclass(frozen=True)
class HankelShape:
    """Dimensions of the structure ``S(p) = H_L(p)`` with ``L + K - 1 = n + m``.

    ``n`` values are known and the last ``m`` are missing.
    """

    L: int
    K: int
    n: int
    m: int = 0

    def __post_init__(self):
        for name in ("L", "K", "n", "m"):
            value = getattr(self, name)
            if int(value) != value:
                raise ShapeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.L < 1 or self.K < 1:
            raise ShapeError(f"L and K must be >= 1, got L={self.L}, K={self.K}")
        if self.n < 1 or self.m < 0:
            raise ShapeError(f"need n >= 1 and m >= 0, got n={self.n}, m={self.m}")
        if self.L + self.K - 1 != self.n + self.m:
            raise ShapeError(
                f"L + K - 1 = {self.L + self.K - 1} does not equal n + m = {self.n + self.m}"
            )

    @classmethod
    def from_window(cls, n, m, L):
        """Shape for ``n`` known and ``m`` missing values with window ``L``."""
        return cls(L=L, K=n + m - L + 1, n=n, m=m)

    @classmethod
    def for_forecast(cls, n, m, L):
        """Like :meth:`from_window`, but reject a missing corner touching row/column 1."""
        shape = cls.from_window(n, m, L)
        shape.require_forecastable()
        return shape

    @property
    def total(self):
        return self.n + self.m

    def require_forecastable(self):
        if self.m >= min(self.L, self.K):
            raise PreconditionError(
                f"forecasting needs m < min(L, K); got m={self.m}, L={self.L}, K={self.K}"
            )


@dataclass(frozen=True)
class WeightVector:
    """Strictly positive weights ``w_1, ..., w_n`` of the seminorm ``||x||_W``."""

    weights: np.ndarray = field()

    def __post_init__(self):
        arr = _as_vector(self.weights, "weights").copy()
        if arr.shape[0] == 0:
            raise ShapeError("weight vector is empty")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise PreconditionError("all weights must be finite and strictly positive")
        arr.flags.writeable = False
        object.__setattr__(self, "weights", arr)

    def __len__(self):
        return self.weights.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.weights
        return self.weights.astype(dtype)


def embed(p, L):
    """Hankel matrix ``H_L(p)`` with ``H[i, j] = p[i + j - 1]`` (1-based).

    Parameters
    ----------
    p : array_like
        Series of length ``L + K - 1``.
    L : int
        Window length (number of rows).

    Returns
    -------
    ndarray, shape (L, K)
    """
    p = _as_vector(p)
    L = int(L)
    if L < 1 or L > p.shape[0]:
        raise ShapeError(f"window length L={L} incompatible with series length {p.shape[0]}")
    return _backend.hankel(np.ascontiguousarray(p), L)


def adjoint_sum(X):
    """Adjoint of :func:`embed`: sums of ``X`` along each antidiagonal."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {X.shape}")
    return _backend.antidiag_sums(X)


def diagonal_average(X):
    """Antidiagonal means of ``X``.

    This is the orthogonal projection of ``X`` onto Hankel matrices, read back
    as a series (the SSA reconstruction step).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {X.shape}")
    return _backend.antidiag_means(X)


def multiplicity(i, L, K):
    """Number of entries of an ``L x K`` Hankel matrix equal to ``p_i`` (1-based)."""
    if not 1 <= i <= L + K - 1:
        raise IndexError(f"index {i} outside 1..{L + K - 1}")
    return min(i, L, K, L + K - i)


def multiplicities(L, K):
    """Vector of :func:`multiplicity` for ``i = 1 .. L + K - 1``."""
    idx = np.arange(1, L + K)
    return np.minimum(np.minimum(idx, L), np.minimum(K, L + K - idx)).astype(np.float64)


def weighted_norm(x, W):
    """``sqrt(sum_i w_i x_i**2)``."""
    x = _as_vector(x, "x")
    w = _as_vector(W, "weights")
    if x.shape != w.shape:
        raise ShapeError(f"length mismatch: x has {x.shape[0]}, W has {w.shape[0]}")
    return float(np.sqrt(np.sum(w * x * x)))
