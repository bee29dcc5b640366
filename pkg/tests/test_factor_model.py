import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from unicornsim.errors import (
    CalibrationInfeasible,
    DegenerateLoading,
    KindMismatch,
    NonPositiveRhoBar,
    OutOfRange,
    UnknownGroup,
)
from unicornsim.factor_model import (
    build_affiliation,
    build_loadings,
    calibrate_w0,
    exceedance_threshold,
    normalize_loading,
    pairwise_correlation,
)
from unicornsim.universe import (
    DEFAULT_KIND_WEIGHTS,
    Affiliation,
    Deal,
    FactorUniverse,
    Group,
    GroupKind,
    KindWeights,
    cross_product_affiliations,
)

from conftest import single_sector_universe, tiny_universe


# ---------------------------------------------------------------------------
# Independent normal-quantile oracle: Acklam's rational approximation with a
# Newton polish step driven by the stdlib erfc.  Kept free of scipy so the
# production quantile is checked against a genuinely separate implementation.
# ---------------------------------------------------------------------------

_ACKLAM_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_ACKLAM_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_ACKLAM_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_ACKLAM_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def _normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def oracle_normal_quantile(p: float) -> float:
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    p_low, p_high = 0.02425, 1 - 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1
        )
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
            ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1
        )
    else:
        q = math.sqrt(-2 * math.log1p(-p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1
        )
    for _ in range(2):  # Newton polish to machine precision
        error = _normal_cdf(x) - p
        x -= error / _normal_pdf(x)
    return x


class TestBuildAffiliation:
    def test_eleven_group_weights(self, fixture_universe):
        deal = Deal("d", 0.04, "AI", "CA", "Repeat")
        r = build_affiliation(deal, DEFAULT_KIND_WEIGHTS, fixture_universe)
        labels = fixture_universe.labels
        assert r[labels.index("AI")] == pytest.approx(math.sqrt(0.6))
        assert r[labels.index("CA")] == pytest.approx(math.sqrt(0.3))
        assert r[labels.index("Repeat")] == pytest.approx(math.sqrt(0.1))
        assert np.count_nonzero(r) == 3

    def test_single_kind_degenerate_weights(self):
        universe = tiny_universe()
        deal = Affiliation(sector="S1", geography="G1", founder="F1")
        r = build_affiliation(deal, KindWeights(1.0, 0.0, 0.0), universe)
        expected = np.zeros(4)
        expected[0] = 1.0
        np.testing.assert_allclose(r, expected)

    def test_unknown_group(self, fixture_universe):
        deal = Deal("d", 0.04, "Crypto", "CA", "Repeat")
        with pytest.raises(UnknownGroup):
            build_affiliation(deal, DEFAULT_KIND_WEIGHTS, fixture_universe)

    def test_kind_mismatch(self, fixture_universe):
        deal = Deal("d", 0.04, "CA", "AI", "Repeat")  # sector/geo swapped
        with pytest.raises(KindMismatch):
            build_affiliation(deal, DEFAULT_KIND_WEIGHTS, fixture_universe)


class TestNormalizeLoading:
    def test_identity_sigma_unit_vector(self):
        sigma = np.eye(3)
        r = np.array([0.0, 1.0, 0.0])
        np.testing.assert_allclose(normalize_loading(r, sigma), r)

    def test_two_group_hand_expansion(self):
        # r' Sigma r = 0.5 + 0.5 + 2*0.5*0.5 = 1.5
        sigma = np.array([[1.0, 0.5], [0.5, 1.0]])
        r = np.array([math.sqrt(0.5), math.sqrt(0.5)])
        b = normalize_loading(r, sigma)
        np.testing.assert_allclose(b, r / math.sqrt(1.5), atol=1e-15)
        assert b @ sigma @ b == pytest.approx(1.0, abs=1e-9)

    def test_zero_vector_degenerate(self):
        with pytest.raises(DegenerateLoading):
            normalize_loading(np.zeros(2), np.eye(2))

    def test_null_space_degenerate(self):
        sigma = np.array([[1.0, -1.0], [-1.0, 1.0]])  # rank 1
        with pytest.raises(DegenerateLoading):
            normalize_loading(np.array([1.0, 1.0]), sigma)

    @given(scale=st.floats(min_value=1e-6, max_value=1e6))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariance(self, scale, fixture_universe):
        deal = Affiliation(sector="SaaS", geography="NY", founder="FirstTime")
        r = build_affiliation(deal, DEFAULT_KIND_WEIGHTS, fixture_universe)
        b = normalize_loading(r, fixture_universe.sigma)
        b_scaled = normalize_loading(scale * r, fixture_universe.sigma)
        np.testing.assert_allclose(b_scaled, b, atol=1e-9)


class TestPairwiseCorrelation:
    def test_identical_deals_give_w0_squared(self, fixture_universe):
        deal = Affiliation(sector="AI", geography="CA", founder="Repeat")
        r = build_affiliation(deal, DEFAULT_KIND_WEIGHTS, fixture_universe)
        b = normalize_loading(r, fixture_universe.sigma)
        rho = pairwise_correlation(b, b, 0.5, fixture_universe.sigma)
        assert rho == pytest.approx(0.25, abs=1e-12)

    def test_zero_scale_gives_independence(self, fixture_universe):
        rng = np.random.default_rng(3)
        b_i = rng.normal(size=fixture_universe.size)
        b_j = rng.normal(size=fixture_universe.size)
        assert pairwise_correlation(b_i, b_j, 0.0, fixture_universe.sigma) == 0.0

    def test_two_single_sector_deals_hand_value(self):
        # single-sector loadings e_s, e_t with sigma_st = 0.4, w0 = 0.5
        sigma = np.array([[1.0, 0.4], [0.4, 1.0]])
        e_s = np.array([1.0, 0.0])
        e_t = np.array([0.0, 1.0])
        assert pairwise_correlation(e_s, e_t, 0.5, sigma) == pytest.approx(0.1, abs=1e-15)

    def test_symmetry(self, fixture_universe):
        rng = np.random.default_rng(4)
        b_i = rng.normal(size=fixture_universe.size)
        b_j = rng.normal(size=fixture_universe.size)
        assert pairwise_correlation(
            b_i, b_j, 0.7, fixture_universe.sigma
        ) == pairwise_correlation(b_j, b_i, 0.7, fixture_universe.sigma)


class TestCalibrateW0:
    def test_identical_affiliations(self, fixture_universe):
        members = [Affiliation("AI", "CA", "Repeat")] * 5
        w0, rho_bar = calibrate_w0(fixture_universe, DEFAULT_KIND_WEIGHTS, members, 0.12)
        assert rho_bar == pytest.approx(1.0, abs=1e-9)
        assert w0 == pytest.approx(math.sqrt(0.12), abs=1e-9)

    def test_zero_target_gives_independence(self, fixture_universe):
        members = cross_product_affiliations(fixture_universe)
        w0, _ = calibrate_w0(fixture_universe, DEFAULT_KIND_WEIGHTS, members, 0.0)
        assert w0 == 0.0

    def test_calibration_identity_on_cross_product(self, fixture_universe):
        members = cross_product_affiliations(fixture_universe)
        assert len(members) == 5 * 4 * 2
        w0, rho_bar = calibrate_w0(fixture_universe, DEFAULT_KIND_WEIGHTS, members, 0.12)
        assert w0 * w0 * rho_bar == pytest.approx(0.12, abs=1e-12)
        assert 0.0 < w0 * w0 < 1.0

    def test_infeasible_target(self):
        # Two sectors at -0.5 pull the average pair correlation below 0.12.
        universe = tiny_universe(sigma_12=-0.5)
        members = cross_product_affiliations(universe)
        with pytest.raises(CalibrationInfeasible):
            calibrate_w0(universe, DEFAULT_KIND_WEIGHTS, members, 0.12)

    def test_negative_rho_bar(self):
        universe = tiny_universe(sigma_12=-0.8)
        members = cross_product_affiliations(universe)
        with pytest.raises(NonPositiveRhoBar):
            calibrate_w0(universe, DEFAULT_KIND_WEIGHTS, members, 0.12)

    def test_needs_two_members(self, fixture_universe):
        with pytest.raises(Exception):
            calibrate_w0(
                fixture_universe, DEFAULT_KIND_WEIGHTS, [Affiliation("AI", "CA", "Repeat")], 0.12
            )


class TestExceedanceThreshold:
    def test_median(self):
        assert exceedance_threshold(0.5) == pytest.approx(0.0, abs=1e-12)

    def test_frozen_values(self):
        assert exceedance_threshold(0.04) == pytest.approx(1.750686, abs=1e-6)
        assert exceedance_threshold(0.02) == pytest.approx(2.053749, abs=1e-6)

    def test_against_independent_quantile(self):
        grid = np.concatenate(
            [
                np.array([1e-6, 1e-4, 0.02, 0.04, 0.5, 0.96, 0.98, 1 - 1e-6]),
                np.linspace(0.001, 0.999, 97),
            ]
        )
        for p in grid:
            assert exceedance_threshold(p) == pytest.approx(
                oracle_normal_quantile(1.0 - p), abs=1e-9
            )

    @given(
        p1=st.floats(min_value=1e-6, max_value=1 - 1e-6),
        p2=st.floats(min_value=1e-6, max_value=1 - 1e-6),
    )
    @settings(max_examples=100, deadline=None)
    def test_strictly_decreasing(self, p1, p2):
        # strictness is only resolvable for probabilities that differ by
        # more than double-precision quantile rounding; adjacent floats can
        # legitimately map to the same threshold
        assume(abs(p1 - p2) > 1e-9 * max(p1, p2))
        if p1 < p2:
            assert exceedance_threshold(p1) > exceedance_threshold(p2)
        elif p2 < p1:
            assert exceedance_threshold(p2) > exceedance_threshold(p1)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.3])
    def test_out_of_range(self, p):
        with pytest.raises(OutOfRange):
            exceedance_threshold(p)


class TestKindWeights:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(Exception, match="sum to 1"):
            KindWeights(0.6, 0.3, 0.2)
        with pytest.raises(Exception, match=">= 0"):
            KindWeights(1.2, -0.1, -0.1)

    def test_default_prior(self):
        assert (
            DEFAULT_KIND_WEIGHTS.sector,
            DEFAULT_KIND_WEIGHTS.geography,
            DEFAULT_KIND_WEIGHTS.founder,
        ) == (0.6, 0.3, 0.1)


class TestBuildLoadings:
    def test_normalization_invariant(self, fixture_universe):
        deals = [
            Deal(f"d{i}", 0.05, s, g, f)
            for i, (s, g, f) in enumerate(
                [
                    ("AI", "CA", "Repeat"),
                    ("Healthcare", "MA", "FirstTime"),
                    ("SaaS", "NY", "Repeat"),
                ]
            )
        ]
        loadings = build_loadings(deals, fixture_universe, DEFAULT_KIND_WEIGHTS)
        for b in loadings.b:
            assert b @ fixture_universe.sigma @ b == pytest.approx(1.0, abs=1e-9)
        assert loadings.w0**2 < 1.0
        np.testing.assert_allclose(loadings.w, loadings.w0 * loadings.b)

    def test_portfolio_as_calibration_universe(self, fixture_universe):
        deals = [Deal(f"d{i}", 0.04, "AI", "CA", "Repeat") for i in range(3)]
        loadings = build_loadings(
            deals, fixture_universe, DEFAULT_KIND_WEIGHTS, calibration_universe=deals
        )
        # identical deals: rho_bar' = 1, so the pair correlation equals the target
        assert loadings.w0**2 == pytest.approx(0.12, abs=1e-12)
