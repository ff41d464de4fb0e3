# cython: language_level=3
"""Compiled inner-loop kernels; see ``_pykernels`` for the reference versions."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, INFINITY

cnp.import_array()


def hankel(const double[::1] p, Py_ssize_t L):
    cdef Py_ssize_t N = p.shape[0]
    cdef Py_ssize_t K = N - L + 1
    cdef Py_ssize_t i, j
    out = np.empty((L, K), dtype=np.float64)
    cdef double[:, ::1] H = out
    for i in range(L):
        for j in range(K):
            H[i, j] = p[i + j]
    return out


def antidiag_sums(const double[:, :] X):
    cdef Py_ssize_t L = X.shape[0]
    cdef Py_ssize_t K = X.shape[1]
    cdef Py_ssize_t i, j
    out = np.zeros(L + K - 1, dtype=np.float64)
    cdef double[::1] s = out
    for i in range(L):
        for j in range(K):
            s[i + j] += X[i, j]
    return out


def antidiag_means(const double[:, :] X):
    cdef Py_ssize_t L = X.shape[0]
    cdef Py_ssize_t K = X.shape[1]
    cdef Py_ssize_t i, j, c
    out = np.zeros(L + K - 1, dtype=np.float64)
    cdef double[::1] s = out
    for i in range(L):
        for j in range(K):
            s[i + j] += X[i, j]
    for i in range(L + K - 1):
        c = min(min(i + 1, L), min(K, L + K - 1 - i))
        s[i] /= c
    return out


def project_weighted_ball(t, a, w, p0, double tau, double tol=1e-12, int max_iter=200):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p0, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t i
    cdef int it
    cdef double e, g0 = 0.0, tau2 = tau * tau, hi_acc = 0.0
    cdef double lo, hi, mu, g, dg, den, q, sg, phi, dphi, cand, nrm
    cdef bint step_ok

    x_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] ae2w = np.empty(n, dtype=np.float64)
    for i in range(n):
        e = tv[i] - pv[i]
        g0 += wv[i] * e * e
        ae2w[i] = (av[i] * e) * (av[i] * e) * wv[i]
        hi_acc += (av[i] * e) * (av[i] * e) / wv[i]
    if g0 <= tau2:
        for i in range(n):
            x[i] = tv[i]
        return x_arr, 0.0
    if tau <= 0.0:
        for i in range(n):
            x[i] = pv[i]
        return x_arr, INFINITY

    lo = 0.0
    hi = sqrt(hi_acc) / tau
    mu = 0.0
    for it in range(max_iter):
        g = 0.0
        dg = 0.0
        for i in range(n):
            den = av[i] + mu * wv[i]
            q = ae2w[i] / (den * den)
            g += q
            dg += q * wv[i] / den
        dg *= -2.0
        if fabs(g - tau2) <= tol * tau2:
            break
        if g > tau2:
            lo = mu
        else:
            hi = mu
        sg = sqrt(g)
        step_ok = g * sg > 0.0
        if step_ok:
            phi = 1.0 / sg - 1.0 / tau
            dphi = -0.5 * dg / (g * sg)
            step_ok = dphi > 0.0
        if step_ok:
            cand = mu - phi / dphi
            step_ok = lo < cand < hi
        mu = cand if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(hi, 1.0):
            break

    nrm = 0.0
    for i in range(n):
        e = tv[i] - pv[i]
        x[i] = av[i] * e / (av[i] + mu * wv[i])
        nrm += wv[i] * x[i] * x[i]
    nrm = sqrt(nrm)
    if nrm > tau:
        q = tau / nrm
        for i in range(n):
            x[i] *= q
    for i in range(n):
        x[i] += pv[i]
    return x_arr, mu


def prox_weighted_norm(t, a, w, p0, double kappa, double tol=1e-12, int max_iter=200):
    cdef const double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p0, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    cdef Py_ssize_t i
    cdef int it
    cdef double e, ka, dual = 0.0, hi_acc = 0.0
    cdef double lo, hi, s, h, dh, den, q, cand
    cdef bint step_ok

    x_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] num = np.empty(n, dtype=np.float64)
    for i in range(n):
        e = tv[i] - pv[i]
        ka = kappa * av[i]
        dual += (ka * e) * (ka * e) / wv[i]
        num[i] = wv[i] * (ka * e) * (ka * e)
        hi_acc += wv[i] * e * e
    if dual <= 1.0:
        for i in range(n):
            x[i] = pv[i]
        return x_arr, 0.0

    lo = 0.0
    hi = sqrt(hi_acc)
    s = 0.0
    for it in range(max_iter):
        h = 0.0
        dh = 0.0
        for i in range(n):
            ka = kappa * av[i]
            den = wv[i] + ka * s
            q = num[i] / (den * den)
            h += q
            dh += q * ka / den
        dh *= -2.0
        if fabs(h - 1.0) <= tol:
            break
        if h > 1.0:
            lo = s
        else:
            hi = s
        step_ok = dh < 0.0
        if step_ok:
            cand = s - (h - 1.0) / dh
            step_ok = lo < cand < hi
        s = cand if step_ok else 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(hi, 1.0):
            break

    for i in range(n):
        ka = kappa * av[i]
        x[i] = pv[i] + ka * (tv[i] - pv[i]) * s / (ka * s + wv[i])
    return x_arr, s
