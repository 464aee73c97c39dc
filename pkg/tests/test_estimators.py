"""Estimator unit tests.

Expected values are computed with exact rational arithmetic
(fractions.Fraction) as an independent oracle, then compared to the
floating-point implementation at tight tolerance.
"""

from fractions import Fraction

import pytest

from vintagepd.errors import (
    DomainError,
    HorizonUnobservedError,
    ValidationError,
)
from vintagepd.estimators import (
    Estimator,
    Rollup,
    aggregate_by_rating,
    curve_difference,
    default_rate,
    mean_of_ratios,
    pd_curve,
    portfolio_rollup,
    ratio_of_means,
)
from vintagepd.triangles import CohortRecord, CohortTriangle

# Exact per-cohort data behind the 4-cohort toy triangle.
TOY = {
    2006: (3385, (0, 1, 2, 2, 3)),
    2007: (4375, (0, 2, 4, 7)),
    2008: (3518, (1, 4, 6)),
    2009: (2486, (0, 2)),
}


def oracle_mr(horizon: int) -> Fraction:
    rates = [
        Fraction(d[horizon - 1], n) for n, d in TOY.values() if len(d) >= horizon
    ]
    return sum(rates) / len(rates)


def oracle_rm(horizon: int) -> Fraction:
    cells = [(n, d[horizon - 1]) for n, d in TOY.values() if len(d) >= horizon]
    return Fraction(sum(d for _, d in cells), sum(n for n, _ in cells))


class TestDefaultRate:
    def test_exact_fractions(self):
        assert default_rate(1, 3518) == pytest.approx(1 / 3518, abs=1e-15)
        assert default_rate(3, 3385) == pytest.approx(3 / 3385, abs=1e-15)

    def test_printed_cells(self):
        # Printed at 4 decimals of percent; compare at half a unit.
        assert default_rate(1, 3518) * 100 == pytest.approx(0.0284, abs=5e-5)
        assert default_rate(3, 3385) * 100 == pytest.approx(0.0886, abs=5e-5)

    def test_zero_defaults(self):
        assert default_rate(0, 3385) == 0.0

    def test_empty_cohort(self):
        with pytest.raises(DomainError, match="empty cohort"):
            default_rate(0, 0)

    def test_defaults_exceeding_issued(self):
        with pytest.raises(ValidationError):
            default_rate(5, 3)


class TestToyTriangle:
    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
    def test_mean_of_ratios_matches_oracle(self, table1, t):
        assert mean_of_ratios(table1, t) == pytest.approx(float(oracle_mr(t)), abs=1e-12)

    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
    def test_ratio_of_means_matches_oracle(self, table1, t):
        assert ratio_of_means(table1, t) == pytest.approx(float(oracle_rm(t)), abs=1e-12)

    def test_shrinking_denominator_at_deep_horizons(self, table1):
        # Only 2006 and 2007 observe horizon 4; only 2006 observes 5.
        assert ratio_of_means(table1, 4) == pytest.approx(9 / 7760, abs=1e-15)
        assert ratio_of_means(table1, 5) == pytest.approx(3 / 3385, abs=1e-15)
        assert mean_of_ratios(table1, 5) == pytest.approx(3 / 3385, abs=1e-15)

    def test_unobserved_horizon(self, table1):
        with pytest.raises(HorizonUnobservedError, match="horizon unobserved"):
            mean_of_ratios(table1, 6)
        with pytest.raises(HorizonUnobservedError):
            ratio_of_means(table1, 6)


def scenario_triangle(defaults, exposures):
    cohorts = tuple(
        CohortRecord(issue_year=2000 + i, issued=n, cumulative_defaults=(d,))
        for i, (d, n) in enumerate(zip(defaults, exposures))
    )
    return CohortTriangle(cohorts=cohorts, max_horizon=1)


class TestSensitivityScenarios:
    # Merged-portfolio scenarios: a one-unit bump in either a default
    # count or an exposure count of the smallest cohort.
    def test_baseline(self):
        tri = scenario_triangle((1, 10, 100, 1000), (10, 100, 1000, 10000))
        assert ratio_of_means(tri, 1) == pytest.approx(0.10000, abs=1e-5)
        assert mean_of_ratios(tri, 1) == pytest.approx(0.10000, abs=1e-5)

    def test_extra_default(self):
        tri = scenario_triangle((2, 10, 100, 1000), (10, 100, 1000, 10000))
        assert ratio_of_means(tri, 1) == pytest.approx(1112 / 11110, abs=1e-12)
        assert mean_of_ratios(tri, 1) == pytest.approx(0.125, abs=1e-12)

    def test_extra_exposure(self):
        tri = scenario_triangle((1, 10, 100, 1000), (11, 100, 1000, 10000))
        assert ratio_of_means(tri, 1) == pytest.approx(1111 / 11111, abs=1e-12)
        assert mean_of_ratios(tri, 1) == pytest.approx(
            (Fraction(1, 11) + Fraction(3, 10)) / 4, abs=1e-12
        )


class TestPdCurve:
    def test_covers_exactly_observed_horizons(self, table1):
        curve = pd_curve(table1, Estimator.RATIO_OF_MEANS)
        assert curve.horizons == (1, 2, 3, 4, 5)
        assert [curve.points[t].cohorts_used for t in curve.horizons] == [4, 4, 3, 2, 1]

    @pytest.mark.parametrize("est", list(Estimator))
    def test_matches_pointwise_estimates(self, table1, est):
        curve = pd_curve(table1, est)
        fn = mean_of_ratios if est is Estimator.MEAN_OF_RATIOS else ratio_of_means
        for t in curve.horizons:
            assert curve.rate(t) == fn(table1, t)

    def test_single_cohort_returns_own_rates(self):
        tri = CohortTriangle(
            cohorts=(
                CohortRecord(
                    issue_year=2006, issued=3385, cumulative_defaults=(0, 1, 2, 2, 3)
                ),
            ),
            max_horizon=5,
        )
        for est in Estimator:
            curve = pd_curve(tri, est)
            assert [curve.rate(t) for t in curve.horizons] == [
                0.0,
                1 / 3385,
                2 / 3385,
                2 / 3385,
                3 / 3385,
            ]


class TestRatingAggregation:
    def test_m01_fuses_the_toy_triangle(self, panels, table1):
        # Rating M01 across the four vintage years is exactly the toy
        # triangle except 2009's exposure (4378 vs 4375).
        curves = aggregate_by_rating(panels, Estimator.RATIO_OF_MEANS)
        assert curves["M01"].rate(1) == pytest.approx(1 / 13767, abs=1e-12)
        mor = aggregate_by_rating(panels, Estimator.MEAN_OF_RATIOS)
        expected = float(
            (Fraction(0, 3385) + Fraction(0, 4378) + Fraction(1, 3518) + Fraction(0, 2486)) / 4
        )
        assert mor["M01"].rate(1) == pytest.approx(expected, abs=1e-12)

    def test_single_observer_horizon_collapses(self, panels):
        for est in Estimator:
            curves = aggregate_by_rating(panels, est)
            assert curves["M12"].rate(5) == pytest.approx(573 / 775, abs=1e-12)

    def test_mismatched_rating_sets(self, panels):
        broken = panels[0].__class__(
            year=panels[1].year,
            rating_classes=panels[1].rating_classes[:-1],
        )
        with pytest.raises(ValidationError, match="rating set"):
            aggregate_by_rating([panels[0], broken], Estimator.MEAN_OF_RATIOS)


class TestPortfolioRollup:
    def test_pooled_totals(self, panels):
        rm = portfolio_rollup(panels, Estimator.RATIO_OF_MEANS, Rollup.POOLED_TOTALS)
        assert rm.rate(1) == pytest.approx(3611 / 229864, abs=1e-12)
        mr = portfolio_rollup(panels, Estimator.MEAN_OF_RATIOS, Rollup.POOLED_TOTALS)
        expected = float(
            (
                Fraction(867, 71675)
                + Fraction(1111, 76310)
                + Fraction(1186, 56974)
                + Fraction(447, 24905)
            )
            / 4
        )
        assert mr.rate(1) == pytest.approx(expected, abs=1e-12)

    def test_mean_over_ratings_is_mean_of_per_rating_curves(self, panels):
        for est in Estimator:
            rolled = portfolio_rollup(panels, est, Rollup.MEAN_OVER_RATINGS)
            by_rating = aggregate_by_rating(panels, est)
            for t in rolled.horizons:
                expected = sum(c.rate(t) for c in by_rating.values()) / 12
                assert rolled.rate(t) == pytest.approx(expected, abs=1e-12)
                assert rolled.points[t].cohorts_used == 12


class TestCurveDifference:
    def test_pooled_curves_gap_at_one_year(self, panels):
        mr = portfolio_rollup(panels, Estimator.MEAN_OF_RATIOS, Rollup.POOLED_TOTALS)
        rm = portfolio_rollup(panels, Estimator.RATIO_OF_MEANS, Rollup.POOLED_TOTALS)
        diff = curve_difference(mr, rm)
        # The printed bottom rows (1.64% vs 1.57%) round to +7 bp.
        assert diff[1] == pytest.approx(7.0, abs=1.0)
        assert diff[1] > 0
        # Single observing cohort at the deepest horizon: estimators coincide.
        assert diff[5] == 0.0

    def test_identical_curves(self, table1):
        curve = pd_curve(table1, Estimator.MEAN_OF_RATIOS)
        assert all(v == 0.0 for v in curve_difference(curve, curve).values())

    def test_disjoint_horizons_rejected(self, table1):
        from vintagepd.estimators import CurvePoint, PdCurve

        a = pd_curve(table1, Estimator.MEAN_OF_RATIOS)
        b = PdCurve(
            estimator=Estimator.RATIO_OF_MEANS,
            points={9: CurvePoint(rate=0.1, cohorts_used=1)},
        )
        with pytest.raises(ValidationError, match="no horizon"):
            curve_difference(a, b)
