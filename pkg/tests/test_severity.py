import math

import pytest
from hypothesis import given, strategies as st
from pytest import approx
from scipy.integrate import quad

import bonusmalus as bm
from bonusmalus.errors import DegenerateType, EmptyBand, NegativeDeductible, NonIncreasingThresholds


def quad_truncated_mean(mu, d):
    # independent check: integrate y * density on [0, d]
    val, _ = quad(lambda y: y * math.exp(-y / mu) / mu, 0, d)
    return val


def quad_band_mean(mu, a, b):
    upper = 50 * mu if math.isinf(b) else b
    num, _ = quad(lambda y: y * math.exp(-y / mu) / mu, a, upper)
    den = math.exp(-a / mu) - (0.0 if math.isinf(b) else math.exp(-b / mu))
    return num / den


class TestTypeProbabilities:
    def test_example_a(self, model):
        p = bm.type_probabilities(model, (1, 2, 4))
        assert p.probabilities == approx((0.3935, 0.2387, 0.2325, 0.1353), abs=5e-5)

    def test_example_b(self, model):
        p = bm.type_probabilities(model, (0.3, 1.2, 2.8))
        assert p.probabilities == approx((0.1393, 0.3119, 0.3022, 0.2466), abs=5e-5)

    def test_median_split(self):
        p = bm.type_probabilities(bm.ExponentialSeverity(1.0), (math.log(2),))
        assert p.probabilities == approx((0.5, 0.5))

    def test_unordered_thresholds_rejected(self, model):
        with pytest.raises(NonIncreasingThresholds):
            bm.type_probabilities(model, (2, 1))
        with pytest.raises(NonIncreasingThresholds):
            bm.type_probabilities(model, (-1, 2))

    def test_zero_mass_type_rejected(self, model):
        # far tail carries no representable mass
        with pytest.raises(DegenerateType):
            bm.type_probabilities(model, (1.0, 1e6))

    @given(st.lists(st.floats(0.05, 20.0), min_size=1, max_size=6, unique=True))
    def test_probabilities_sum_to_one(self, model, cuts):
        p = bm.type_probabilities(model, sorted(cuts))
        assert sum(p.probabilities) == approx(1.0, abs=1e-12)


class TestTruncatedMean:
    def test_zero_deductible(self, model):
        assert bm.truncated_mean(model, 0.0) == 0.0

    def test_full_mean_at_infinity(self, model):
        assert bm.truncated_mean(model, math.inf) == approx(2.0)

    def test_matches_quadrature(self, model):
        expected = quad_truncated_mean(2.0, 1.0)
        # closed form: 2 - 3*exp(-1/2)
        assert expected == approx(0.1804079, abs=5e-6)
        assert bm.truncated_mean(model, 1.0) == approx(expected, rel=1e-9)

    def test_negative_rejected(self, model):
        with pytest.raises(NegativeDeductible):
            bm.truncated_mean(model, -0.1)

    @given(st.floats(0.0, 40.0), st.floats(0.0, 40.0))
    def test_nondecreasing(self, model, d1, d2):
        lo, hi = sorted((d1, d2))
        assert bm.truncated_mean(model, lo) <= bm.truncated_mean(model, hi) + 1e-15

    @given(st.floats(0.01, 40.0))
    def test_conditional_mean_below_cap(self, model, d):
        assert bm.truncated_mean(model, d) / model.cdf(d) <= d


class TestBandMean:
    def test_top_band_is_mean_plus_threshold(self, model):
        assert bm.band_mean(model, 4.0, math.inf) == approx(6.0)

    def test_matches_quadrature(self, model):
        expected = quad_band_mean(2.0, 1.0, 2.0)
        assert expected == approx(1.45851, abs=5e-5)
        assert bm.band_mean(model, 1.0, 2.0) == approx(expected, rel=1e-9)

    def test_whole_support(self, model):
        assert bm.band_mean(model, 0.0, math.inf) == approx(2.0)

    def test_empty_band_rejected(self, model):
        with pytest.raises(EmptyBand):
            bm.band_mean(model, 1e6, 2e6)

    @given(st.floats(0.0, 10.0), st.floats(0.1, 10.0))
    def test_strictly_inside_band(self, model, a, width):
        mean = bm.band_mean(model, a, a + width)
        assert a < mean < a + width


class TestMaxPenalty:
    def test_example_a_value(self, model, partition_a):
        assert bm.max_penalty_f(model, partition_a) == approx(1.425489, abs=1e-6)

    def test_matches_term_by_term_sum(self, model, partition_b):
        # independent summation from truncated means and band masses
        cs = partition_b.thresholds
        qs = partition_b.probabilities
        expected = quad_truncated_mean(2.0, cs[0]) + sum(c * q for c, q in zip(cs, qs[1:]))
        assert bm.max_penalty_f(model, partition_b) == approx(expected, rel=1e-9)

    def test_vanishing_threshold_limit(self, model):
        p = bm.type_probabilities(model, (1e-6,))
        assert bm.max_penalty_f(model, p) < 1e-5

    @given(st.lists(st.floats(0.05, 20.0), min_size=1, max_size=6, unique=True))
    def test_strictly_below_mean(self, model, cuts):
        p = bm.type_probabilities(model, sorted(cuts))
        assert bm.max_penalty_f(model, p) < model.mean()
