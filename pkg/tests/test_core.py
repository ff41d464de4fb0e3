import numpy as np
import pytest

from hankelcomp.core import (
    HankelShape,
    TimeSeries,
    WeightVector,
    adjoint_sum,
    diagonal_average,
    embed,
    multiplicities,
    multiplicity,
    weighted_norm,
)
from hankelcomp.errors import PreconditionError, ShapeError


def brute_multiplicity(i, L, K):
    return sum(1 for a in range(1, L + 1) for b in range(1, K + 1) if a + b - 1 == i)


class TestTimeSeries:
    def test_values_frozen(self):
        ts = TimeSeries([1.0, 2.0, 3.0], origin="x")
        assert len(ts) == 3
        with pytest.raises(ValueError):
            ts.values[0] = 5.0

    def test_rejects_short_and_nonfinite(self):
        with pytest.raises(ShapeError):
            TimeSeries([1.0])
        with pytest.raises(ValueError, match="position 2"):
            TimeSeries([1.0, np.nan, 3.0])

    def test_array_protocol(self):
        ts = TimeSeries([1, 2, 3])
        np.testing.assert_array_equal(np.asarray(ts), [1.0, 2.0, 3.0])
        np.testing.assert_array_equal(ts.head(2), [1.0, 2.0])


class TestHankelShape:
    def test_consistency(self):
        with pytest.raises(ShapeError):
            HankelShape(L=3, K=3, n=4, m=2)
        s = HankelShape.from_window(n=10, m=2, L=5)
        assert (s.K, s.total) == (8, 12)

    def test_forecast_constructor_rejects_corner(self):
        with pytest.raises(PreconditionError):
            HankelShape.for_forecast(n=3, m=5, L=4)
        HankelShape.for_forecast(n=13, m=12, L=13)

    def test_invalid_dims(self):
        with pytest.raises(ShapeError):
            HankelShape(L=0, K=3, n=2, m=0)
        with pytest.raises(ShapeError):
            HankelShape(L=2, K=2, n=4, m=-1)


def test_weight_vector_positive():
    with pytest.raises(PreconditionError):
        WeightVector([1.0, 0.0])
    assert len(WeightVector([1.0, 2.0])) == 2


class TestEmbed:
    def test_small_examples(self):
        np.testing.assert_array_equal(embed([1, 2, 3], 2), [[1, 2], [2, 3]])
        np.testing.assert_array_equal(embed([5], 1), [[5]])
        np.testing.assert_array_equal(embed([1, 0, 0, 0, 1], 3), [[1, 0, 0], [0, 0, 0], [0, 0, 1]])

    def test_index_formula(self, rng):
        p = rng.standard_normal(11)
        H = embed(p, 4)
        for i in range(4):
            for j in range(8):
                assert H[i, j] == p[i + j]

    def test_bad_window(self):
        with pytest.raises(ShapeError):
            embed([1, 2, 3], 4)
        with pytest.raises(ShapeError):
            embed([1, 2, 3], 0)

    def test_linear(self, rng):
        p, q = rng.standard_normal((2, 9))
        np.testing.assert_allclose(embed(2 * p - 3 * q, 4), 2 * embed(p, 4) - 3 * embed(q, 4), rtol=0, atol=1e-14)


class TestAdjointAndAverage:
    def test_examples(self):
        np.testing.assert_array_equal(adjoint_sum([[1, 2], [3, 4]]), [1, 5, 4])
        np.testing.assert_array_equal(diagonal_average([[1, 2], [4, 3]]), [1, 3, 3])

    def test_adjoint_of_embed_is_multiplicity(self, rng):
        p = rng.standard_normal(15)
        np.testing.assert_allclose(adjoint_sum(embed(p, 6)), multiplicities(6, 10) * p, rtol=1e-14)

    def test_adjoint_identity(self, rng):
        p = rng.standard_normal(20)
        X = rng.standard_normal((7, 14))
        lhs = np.sum(embed(p, 7) * X)
        rhs = np.dot(p, adjoint_sum(X))
        assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), 1.0)

    def test_projection_optimality(self, rng):
        X = rng.standard_normal((5, 8))
        best = np.linalg.norm(embed(diagonal_average(X), 5) - X)
        for _ in range(100):
            Y = embed(rng.standard_normal(12), 5)
            assert best <= np.linalg.norm(Y - X) + 1e-12

    def test_rejects_vectors(self):
        with pytest.raises(ShapeError):
            adjoint_sum([1.0, 2.0])


class TestMultiplicity:
    @pytest.mark.parametrize("i,L,K,expected", [(1, 2, 4, 1), (3, 2, 4, 2), (35, 20, 50, 20)])
    def test_examples(self, i, L, K, expected):
        assert multiplicity(i, L, K) == expected == brute_multiplicity(i, L, K)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            multiplicity(0, 2, 4)
        with pytest.raises(IndexError):
            multiplicity(6, 2, 4)

    @pytest.mark.parametrize("L,K", [(1, 1), (3, 7), (13, 13), (20, 50)])
    def test_vector_matches_bruteforce(self, L, K):
        expected = [brute_multiplicity(i, L, K) for i in range(1, L + K)]
        np.testing.assert_array_equal(multiplicities(L, K), expected)
        assert multiplicities(L, K).sum() == L * K


class TestWeightedNorm:
    def test_examples(self):
        assert weighted_norm([3, 4], [1, 1]) == 5.0
        assert weighted_norm([1, 1, 1], [4, 9, 16]) == pytest.approx(np.sqrt(29), rel=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            weighted_norm([1, 2], [1, 1, 1])

    def test_trapezoid_frobenius(self, rng):
        n, L = 17, 6
        p, p0 = rng.standard_normal((2, n))
        lhs = weighted_norm(p - p0, multiplicities(L, n - L + 1))
        rhs = np.linalg.norm(embed(p, L) - embed(p0, L))
        assert lhs == pytest.approx(rhs, rel=1e-13)
