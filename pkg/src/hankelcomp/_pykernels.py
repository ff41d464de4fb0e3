"""Pure numpy implementations of the inner-loop kernels.

These mirror ``_ckernels.pyx`` one to one and are used whenever the compiled
extension is unavailable or ``HANKELCOMP_PURE_PYTHON`` is set.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def hankel(p, L):
    p = np.ascontiguousarray(p, dtype=np.float64)
    return np.array(sliding_window_view(p, p.shape[0] - L + 1))


def antidiag_sums(X):
    X = np.asarray(X, dtype=np.float64)
    L, K = X.shape
    out = np.zeros(L + K - 1)
    for i in range(L):
        out[i:i + K] += X[i]
    return out


def antidiag_means(X):
    L, K = np.shape(X)
    idx = np.arange(1, L + K)
    counts = np.minimum(np.minimum(idx, L), np.minimum(K, L + K - idx))
    return antidiag_sums(X) / counts


def project_weighted_ball(t, a, w, p0, tau, tol=1e-12, max_iter=200):
    """Minimise sum a*(x - t)**2 subject to sum w*(x - p0)**2 <= tau**2.

    Returns ``(x, mu)`` with ``mu`` the Lagrange multiplier of the ball.
    """
    t = np.asarray(t, dtype=np.float64)
    p0 = np.asarray(p0, dtype=np.float64)
    e = t - p0
    ae2w = (a * e) ** 2 * w
    g0 = float(np.sum(w * e * e))
    tau2 = tau * tau
    if g0 <= tau2:
        return t.copy(), 0.0
    if tau <= 0.0:
        return p0.copy(), math.inf

    lo = 0.0
    hi = math.sqrt(float(np.sum((a * e) ** 2 / w))) / tau
    mu = 0.0
    for _ in range(max_iter):
        den = a + mu * w
        with np.errstate(over="ignore"):
            g = float(np.sum(ae2w / den ** 2))
        if abs(g - tau2) <= tol * tau2:
            break
        if g > tau2:
            lo = mu
        else:
            hi = mu
        with np.errstate(over="ignore"):
            dg = -2.0 * float(np.sum(ae2w * w / den ** 3))
        # Newton on 1/sqrt(g) - 1/tau, nearly linear in mu
        sg = math.sqrt(g)
        # g can underflow for tiny budgets; fall back to bisection then
        g15 = g * sg
        step_ok = g15 > 0.0 and math.isfinite(dg)
        if step_ok:
            phi = 1.0 / sg - 1.0 / tau
            dphi = -0.5 * dg / g15
            step_ok = dphi > 0.0
        if step_ok:
            cand = mu - phi / dphi
            step_ok = lo < cand < hi
        mu = cand if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(hi, 1.0):
            break

    x = p0 + a * e / (a + mu * w)
    d = x - p0
    nrm = math.sqrt(float(np.sum(w * d * d)))
    if nrm > tau:
        x = p0 + d * (tau / nrm)
    return x, mu


def prox_weighted_norm(t, a, w, p0, kappa, tol=1e-12, max_iter=200):
    """Minimise ||x - p0||_W + (kappa/2) * sum a*(x - t)**2.

    Returns ``(x, s)`` where ``s = ||x - p0||_W``.
    """
    t = np.asarray(t, dtype=np.float64)
    p0 = np.asarray(p0, dtype=np.float64)
    e = t - p0
    ka = kappa * a
    num = w * (ka * e) ** 2
    if float(np.sum((ka * e) ** 2 / w)) <= 1.0:
        return p0.copy(), 0.0

    lo = 0.0
    hi = math.sqrt(float(np.sum(w * e * e)))
    s = 0.0
    for _ in range(max_iter):
        den = w + ka * s
        h = float(np.sum(num / den ** 2))
        if abs(h - 1.0) <= tol:
            break
        if h > 1.0:
            lo = s
        else:
            hi = s
        dh = -2.0 * float(np.sum(num * ka / den ** 3))
        step_ok = dh < 0.0
        if step_ok:
            cand = s - (h - 1.0) / dh
            step_ok = lo < cand < hi
        s = cand if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(hi, 1.0):
            break

    x = p0 + ka * e * s / (ka * s + w)
    return x, s
