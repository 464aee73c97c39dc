"""The two aggregation estimators for multiperiod probability of default.

Given per-cohort default rates p_j(t) = d_j(t) / N_j at horizon t:

* Mean of Ratios (MR): the unweighted arithmetic mean of the p_j(t)
  over the cohorts observing t.
* Ratio of Means (RM): pooled defaults over pooled exposures,
  sum_j d_j(t) / sum_j N_j, both sums over the cohorts observing t.
  Equivalently the exposure-weighted mean of the p_j(t).

Cohorts that do not observe a horizon are excluded from both sums, not
treated as zero: at deep horizons the RM denominator shrinks with the
numerator.

Sums are accumulated in exact integers and divided once (RM) or
accumulated with math.fsum (MR), so golden comparisons hold at 1e-9.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError, HorizonUnobservedError, ValidationError
from .triangles import CohortTriangle, PortfolioPanel, merge_cohorts, pool_panel


class Estimator(enum.Enum):
    MEAN_OF_RATIOS = "mr"
    RATIO_OF_MEANS = "rm"


class Rollup(enum.Enum):
    POOLED_TOTALS = "pooled"
    MEAN_OVER_RATINGS = "mean-over-ratings"


@dataclass(frozen=True)
class CurvePoint:
    rate: float
    cohorts_used: int

    def __post_init__(self):
        if not 0.0 <= self.rate <= 1.0:
            raise ValidationError(f"rate {self.rate} outside [0, 1]")
        if self.cohorts_used < 1:
            raise ValidationError("a curve point needs at least one cohort")


@dataclass(frozen=True)
class PdCurve:
    """Estimated default probability per horizon, with provenance."""

    estimator: Estimator
    points: dict[int, CurvePoint]

    def rate(self, horizon: int) -> float:
        return self.points[horizon].rate

    @property
    def horizons(self) -> tuple[int, ...]:
        return tuple(sorted(self.points))


def default_rate(defaults: int, issued: int) -> float:
    """Observed default rate of one cohort at one horizon: defaults / issued."""
    if issued == 0:
        raise DomainError("empty cohort: issued must be at least 1")
    if issued < 0:
        raise ValidationError(f"issued must be positive, got {issued}")
    if defaults < 0 or defaults > issued:
        raise ValidationError(
            f"defaults must lie in [0, issued]; got {defaults} with issued {issued}"
        )
    return defaults / issued


def mean_of_ratios(triangle: CohortTriangle, horizon: int) -> float:
    """Unweighted mean of per-cohort default rates at the given horizon."""
    observers = triangle.observers(horizon)
    if not observers:
        raise HorizonUnobservedError(horizon)
    return math.fsum(
        default_rate(c.defaults_at(horizon), c.issued) for c in observers
    ) / len(observers)


def ratio_of_means(triangle: CohortTriangle, horizon: int) -> float:
    """Pooled defaults over pooled exposures at the given horizon."""
    observers = triangle.observers(horizon)
    if not observers:
        raise HorizonUnobservedError(horizon)
    total_defaults = sum(c.defaults_at(horizon) for c in observers)
    total_issued = sum(c.issued for c in observers)
    if total_issued == 0:
        raise DomainError("empty cohort: pooled exposure is zero")
    return total_defaults / total_issued


_ESTIMATE = {
    Estimator.MEAN_OF_RATIOS: mean_of_ratios,
    Estimator.RATIO_OF_MEANS: ratio_of_means,
}


def pd_curve(triangle: CohortTriangle, estimator: Estimator) -> PdCurve:
    """Apply one estimator at every horizon observed by at least one cohort."""
    fn = _ESTIMATE[estimator]
    points = {}
    for t in triangle.observed_horizons():
        observers = triangle.observers(t)
        if observers:
            points[t] = CurvePoint(rate=fn(triangle, t), cohorts_used=len(observers))
    return PdCurve(estimator=estimator, points=points)


def _check_rating_sets(panels: list[PortfolioPanel]) -> tuple[str, ...]:
    if not panels:
        raise ValidationError("no panels given")
    ratings = panels[0].ratings
    for panel in panels[1:]:
        if set(panel.ratings) != set(ratings):
            asym = sorted(set(panel.ratings) ^ set(ratings))
            raise ValidationError(
                f"panel {panel.year} rating set differs from panel "
                f"{panels[0].year}: {asym}"
            )
    return ratings


def aggregate_by_rating(
    panels_by_year: list[PortfolioPanel], estimator: Estimator
) -> dict[str, PdCurve]:
    """Fuse each rating's cohorts across vintage years, then estimate per horizon.

    Horizon t automatically uses only the vintage years observing t,
    via the ragged-triangle rule.
    """
    ratings = _check_rating_sets(panels_by_year)
    out = {}
    for rating in ratings:
        merged = merge_cohorts([p.triangle(rating) for p in panels_by_year])
        out[rating] = pd_curve(merged, estimator)
    return out


def portfolio_rollup(
    panels_by_year: list[PortfolioPanel], estimator: Estimator, rollup: Rollup
) -> PdCurve:
    """Collapse a multi-year, multi-rating portfolio into one PD curve.

    POOLED_TOTALS sums all rating classes into one cohort per vintage
    year before estimating. MEAN_OVER_RATINGS estimates per rating first
    (via aggregate_by_rating) and then takes the unweighted mean of the
    per-rating curves at each horizon.
    """
    _check_rating_sets(panels_by_year)
    if rollup is Rollup.POOLED_TOTALS:
        pooled = [pool_panel(p) for p in panels_by_year]
        pooled.sort(key=lambda c: c.issue_year)
        max_h = max(c.depth for c in pooled)
        return pd_curve(
            CohortTriangle(cohorts=tuple(pooled), max_horizon=max_h), estimator
        )

    by_rating = aggregate_by_rating(panels_by_year, estimator)
    horizons = sorted({t for curve in by_rating.values() for t in curve.points})
    points = {}
    for t in horizons:
        rates = [c.points[t].rate for c in by_rating.values() if t in c.points]
        points[t] = CurvePoint(rate=math.fsum(rates) / len(rates), cohorts_used=len(rates))
    return PdCurve(estimator=estimator, points=points)


def curve_difference(a: PdCurve, b: PdCurve) -> dict[int, float]:
    """Per-horizon difference a - b in basis points (1 bp = 0.0001)."""
    common = sorted(set(a.points) & set(b.points))
    if not common:
        raise ValidationError("curves share no horizon")
    return {t: (a.points[t].rate - b.points[t].rate) / 1e-4 for t in common}
