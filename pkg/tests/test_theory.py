import math

import numpy as np
import pytest

from hankelcomp.core import HankelShape, embed
from hankelcomp.errors import PreconditionError, ShapeError
from hankelcomp.solver import Exact, ProblemSpec, SolverConfig, solve
from hankelcomp.theory import (
    c_rho,
    certificate_check,
    max_missing,
    optimal_window,
    rank_one_certificate,
    success_probe,
)

# closed form evaluated independently at 40 digits (mpmath)
C_ORACLE = [
    ((0.8, 13, 13, 5), 0.010769482183614967501),
    ((1.25, 20, 50, 9), 9.2064634594754106244),
    ((0.5, 7, 7, 6), 0.0078125),
    ((1.3, 13, 13, 2), 1.7437347380498870724),
    ((0.9, 35, 35, 3), 0.00054424764810119713362),
    ((0.05, 30, 30, 10), 1.7763568394002552965e-64),
]

# real-valued bound on m + 1 at L = K = 13 (same oracle)
BOUND_ORACLE = {
    0.8: 25.986476412949114896,
    0.9: 25.41102026645787843,
    0.95: 22.156175099890638295,
    1.05: 7.2158309490977224364,
    1.1: 4.6519382248129842736,
    1.25: 2.1504533460192485577,
    1.3: 1.8322779516520176166,
    10.0: 0.20898764024997873377,
}


class TestCRho:
    @pytest.mark.parametrize("args,expected", C_ORACLE)
    def test_oracle(self, args, expected):
        assert c_rho(*args) == pytest.approx(expected, rel=1e-12)

    def test_unit_branch(self):
        assert c_rho(1.0, 20, 50, 9) == pytest.approx(10 / math.sqrt(1000), rel=1e-15)
        assert c_rho(1.0, 1, 1, 0) == 1.0

    def test_continuity(self):
        ref = c_rho(1.0, 20, 50, 9)
        for rho in (1 - 1e-6, 1 + 1e-6):
            assert abs(c_rho(rho, 20, 50, 9) - ref) <= 1e-4

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            c_rho(0.0, 5, 5, 1)
        with pytest.raises(PreconditionError):
            c_rho(0.9, 5, 5, 5)


class TestMaxMissing:
    def test_unit_modulus(self):
        b = max_missing(1.0, 13, 13)
        assert b.bound == 13.0 and b.max_m == 11

    @pytest.mark.parametrize("rho", sorted(BOUND_ORACLE))
    def test_bound_oracle(self, rho):
        assert max_missing(rho, 13, 13).bound == pytest.approx(BOUND_ORACLE[rho], rel=1e-12)

    def test_large_rho(self):
        b = max_missing(10.0, 13, 13)
        assert b.max_m <= 0
        assert b.max_m == -1 and c_rho(10.0, 13, 13, 0) >= 1

    @pytest.mark.parametrize("rho", [0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25])
    def test_duality_with_c_rho(self, rho):
        b = max_missing(rho, 13, 13)
        for m in range(13):
            assert (m <= b.max_m) == (c_rho(rho, 13, 13, m) < 1.0)

    @pytest.mark.parametrize("rho", [1.0, 1.05, 1.1, 1.25])
    def test_edge(self, rho):
        b = max_missing(rho, 13, 13)
        assert c_rho(rho, 13, 13, b.max_m) < 1 <= c_rho(rho, 13, 13, b.max_m + 1)

    def test_admissible_cap(self):
        b = max_missing(0.8, 13, 13)
        assert b.max_m == 24 and b.admissible_max == 12


class TestOptimalWindow:
    def test_examples(self):
        assert optimal_window(69, 3) == 35
        L = optimal_window(70, 3)
        assert L == 36 and abs(L - (70 - L + 1)) == 1

    @pytest.mark.parametrize("rho", [0.9, 1.0, 1.1])
    def test_bruteforce(self, rho):
        total, m = 69, 3
        values = {L: c_rho(rho, L, total - L + 1, m) for L in range(m + 1, total - m + 1)}
        assert min(values, key=values.get) == optimal_window(total, m)

    def test_preconditions(self):
        with pytest.raises(PreconditionError):
            optimal_window(1)
        with pytest.raises(PreconditionError):
            optimal_window(5, 3)


def _missing_constraints(M, B, shape):
    L, K = M.shape
    out = []
    for k in range(shape.n, shape.total):
        i = np.arange(max(0, k - K + 1), min(L, k + 1))
        out.append(np.sum((M + B)[i, k - i]))
    return np.array(out)


class TestRankOneCertificate:
    @pytest.mark.parametrize("rho", [0.7, 1.0, 1.3])
    @pytest.mark.parametrize("m", [0, 5, 9])
    def test_norm_equals_bound(self, rho, m):
        shape = HankelShape(20, 50, 69 - m, m)
        cert = rank_one_certificate(1.0, rho, shape)
        assert cert.spectral_norm == pytest.approx(c_rho(rho, 20, 50, m), rel=1e-10)
        if m > 0:
            assert cert.matrix_norm == pytest.approx(cert.spectral_norm, rel=1e-10)

    def test_unit_modulus_sigmas(self):
        shape = HankelShape(20, 50, 60, 9)
        cert = rank_one_certificate(2.5, 1.0, shape)
        assert cert.sigma == pytest.approx(2.5 * math.sqrt(1000), rel=1e-14)
        assert cert.sigma_prime == pytest.approx(2.5 * 10, rel=1e-14)

    def test_sigmas_are_singular_values(self):
        lam, c = 0.83, -1.7
        shape = HankelShape(9, 12, 16, 4)
        cert = rank_one_certificate(c, lam, shape)
        X = embed(c * lam ** np.arange(1, 21), 9)
        assert cert.sigma == pytest.approx(np.linalg.norm(X, 2), rel=1e-12)
        assert cert.sigma_prime == pytest.approx(np.linalg.norm(X[-5:, -5:], 2), rel=1e-12)

    @pytest.mark.parametrize("lam", [0.6, -0.75, 1.2, 0.9 * np.exp(0.7j)])
    def test_certificate_conditions(self, lam):
        shape = HankelShape(8, 11, 14, 4)
        cert = rank_one_certificate(1.0, lam, shape)
        p = lam ** np.arange(1, 19)
        H = p[np.arange(8)[:, None] + np.arange(11)[None, :]]
        U, s, Vh = np.linalg.svd(H)
        u, v = U[:, :1], Vh[:1].conj().T
        B = u @ v.conj().T
        M = cert.matrix
        assert np.linalg.norm(u.conj().T @ M) <= 1e-12 and np.linalg.norm(M @ v) <= 1e-12
        assert np.max(np.abs(_missing_constraints(M, B, shape))) <= 1e-12
        assert np.linalg.norm(M, 2) == pytest.approx(c_rho(abs(lam), 8, 11, 4), rel=1e-10)

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            rank_one_certificate(1.0, 0.5, HankelShape(3, 8, 4, 6))
        with pytest.raises(PreconditionError):
            rank_one_certificate(0.0, 0.5, HankelShape(7, 7, 7, 6))


class TestCertificateCheck:
    def test_decaying_rank_one(self):
        shape = HankelShape(7, 7, 7, 6)
        rep = certificate_check(0.5 ** np.arange(1, 14), shape)
        assert rep.verdict == "certified-unique"
        assert abs(rep.spectral_norm - c_rho(0.5, 7, 7, 6)) <= 1e-6
        assert rep.constraint_residual < 1e-8 and rep.rank == 1

    def test_increasing_not_certified(self):
        shape = HankelShape(7, 7, 7, 6)
        rep = certificate_check(1.5 ** np.arange(1, 14), shape)
        assert rep.verdict == "inconclusive" and rep.spectral_norm >= 1

    def test_no_missing(self):
        rep = certificate_check(np.arange(1.0, 10.0), HankelShape(4, 6, 9, 0))
        assert rep.verdict == "certified-unique" and rep.spectral_norm == 0.0
        assert not np.any(rep.certificate)

    def test_rank_ambiguity(self):
        k = np.arange(1, 14)
        p = 0.5 ** k + 1e-6 * (-0.8) ** k + 3e-7 * 0.2 ** k
        rep = certificate_check(p, HankelShape(7, 7, 7, 6))
        assert rep.verdict == "inconclusive" and rep.certificate is None

    def test_length(self):
        with pytest.raises(ShapeError):
            certificate_check(np.ones(6), HankelShape(3, 3, 4, 1))

    def test_rank_two_uses_min_frobenius(self):
        k = np.arange(1, 31)
        p = 0.95 ** k * np.cos(2 * np.pi * k / 7)
        rep = certificate_check(p, HankelShape(15, 16, 25, 5))
        assert rep.certified and rep.rank == 2
        assert rep.spectral_norm <= rep.frobenius_certificate_norm + 1e-15

    def test_soundness_against_fresh_solve(self):
        # a certified-unique candidate is what the solver returns from any start
        k = np.arange(1, 31)
        p = 0.95 ** k * np.cos(2 * np.pi * k / 7)
        shape = HankelShape(15, 16, 25, 5)
        assert certificate_check(p, shape).verdict == "certified-unique"
        init = np.concatenate([p[:25], -np.ones(5)])
        cfg = SolverConfig(eps_abs=1e-12, eps_rel=1e-10, max_iterations=50000)
        res = solve(ProblemSpec(p0=p[:25], shape=shape, init=init), cfg)
        assert np.linalg.norm(embed(res.completed, 15) - embed(p, 15)) <= 1e-6

    def test_solver_output_certified(self):
        k = np.arange(1, 41)
        p = 0.9 ** k * np.cos(2 * np.pi * k / 9) + 0.8 ** k
        shape = HankelShape(20, 21, 36, 4)
        cfg = SolverConfig(eps_abs=1e-12, eps_rel=1e-10, max_iterations=50000)
        res = solve(ProblemSpec(p0=p[:36], shape=shape, mode=Exact()), cfg)
        assert res.converged
        rep = certificate_check(res.completed, shape)
        assert rep.certified


class TestSuccessProbe:
    SHAPE = HankelShape(13, 13, 13, 12)

    @pytest.mark.parametrize("m", [1, 6, 11])
    def test_decaying_succeeds(self, m):
        shape = HankelShape(13, 13, 25 - m, m)
        probe = success_probe(0.5 ** np.arange(1, 26), shape)
        assert probe and probe.distance <= 1e-4

    def test_inside_bound_succeeds(self):
        for rho in (0.9, 1.05, 1.2):
            b = max_missing(rho, 13, 13)
            m = max(min(b.max_m, 12), 1)
            if b.max_m < 1:
                continue
            shape = HankelShape(13, 13, 25 - m, m)
            assert success_probe(rho ** np.arange(1, 26), shape)

    def test_large_root_fails(self):
        probe = success_probe(2.0 ** np.arange(1, 26), self.SHAPE)
        assert not probe and not probe.iteration_limited

    def test_iteration_limit_flag(self):
        probe = success_probe(0.5 ** np.arange(1, 26), self.SHAPE, SolverConfig(max_iterations=2))
        assert not probe.success and probe.iteration_limited

    def test_length(self):
        with pytest.raises(ShapeError):
            success_probe(np.ones(10), self.SHAPE)
