"""Cohort default triangles and portfolio panels.

A cohort (vintage) is the set of mortgages issued in one calendar year.
For each cohort we track the cumulative number of defaults observed at
horizons t = 1..H years after issuance. Recent cohorts observe fewer
horizons, so the data forms a ragged triangle: observability is
contiguous (if horizon t is observed, every earlier horizon is too).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .errors import ValidationError


@dataclass(frozen=True)
class CohortRecord:
    """One issue-year cohort: exposure count plus cumulative defaults per horizon.

    ``cumulative_defaults[t-1]`` is the number of defaults observed up to
    horizon t. The sequence may be shorter than the triangle's maximum
    horizon when later horizons are not yet observable.
    """

    issue_year: int
    issued: int
    cumulative_defaults: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "cumulative_defaults", tuple(int(d) for d in self.cumulative_defaults)
        )
        if self.issued < 0:
            raise ValidationError(f"cohort {self.issue_year}: issued must be non-negative")
        if self.cumulative_defaults and self.issued < 1:
            raise ValidationError(
                f"cohort {self.issue_year}: defaults observed but no mortgages issued"
            )
        prev = 0
        for t, d in enumerate(self.cumulative_defaults, start=1):
            if d < 0:
                raise ValidationError(
                    f"cohort {self.issue_year}: negative default count at horizon {t}"
                )
            if d < prev:
                raise ValidationError(
                    f"cohort {self.issue_year}: cumulative defaults decrease at horizon {t} "
                    f"({prev} -> {d})"
                )
            if d > self.issued:
                raise ValidationError(
                    f"cohort {self.issue_year}: defaults {d} exceed issued {self.issued} "
                    f"at horizon {t}"
                )
            prev = d

    @property
    def depth(self) -> int:
        """Number of horizons this cohort observes."""
        return len(self.cumulative_defaults)

    def observes(self, horizon: int) -> bool:
        return 1 <= horizon <= self.depth

    def defaults_at(self, horizon: int) -> int:
        if not self.observes(horizon):
            raise ValidationError(
                f"cohort {self.issue_year} does not observe horizon {horizon}"
            )
        return self.cumulative_defaults[horizon - 1]


@dataclass(frozen=True)
class CohortTriangle:
    """Ragged triangle of cohorts with a shared horizon convention."""

    cohorts: tuple[CohortRecord, ...]
    max_horizon: int

    def __post_init__(self):
        object.__setattr__(self, "cohorts", tuple(self.cohorts))
        if not self.cohorts:
            raise ValidationError("triangle has no cohorts")
        if self.max_horizon < 1:
            raise ValidationError("max_horizon must be at least 1")
        years = [c.issue_year for c in self.cohorts]
        for a, b in zip(years, years[1:]):
            if b <= a:
                raise ValidationError(
                    f"issue years must be strictly increasing (saw {a} then {b})"
                )
        for c in self.cohorts:
            if c.depth > self.max_horizon:
                raise ValidationError(
                    f"cohort {c.issue_year} observes {c.depth} horizons, "
                    f"more than max_horizon {self.max_horizon}"
                )

    def observers(self, horizon: int) -> tuple[CohortRecord, ...]:
        """Cohorts that observe the given horizon."""
        return tuple(c for c in self.cohorts if c.observes(horizon))

    def observed_horizons(self) -> Iterator[int]:
        """Horizons observed by at least one cohort, in increasing order."""
        deepest = max(c.depth for c in self.cohorts)
        return iter(range(1, deepest + 1))


@dataclass(frozen=True)
class PortfolioPanel:
    """One vintage year's portfolio: a cohort triangle per rating class.

    Rating labels are opaque; order is preserved but carries no meaning
    for the math.
    """

    year: int
    rating_classes: tuple[tuple[str, CohortTriangle], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "rating_classes", tuple(self.rating_classes))
        if not self.rating_classes:
            raise ValidationError(f"panel {self.year} has no rating classes")
        seen = set()
        for rating, _ in self.rating_classes:
            if rating in seen:
                raise ValidationError(f"panel {self.year}: duplicate rating {rating!r}")
            seen.add(rating)

    @property
    def ratings(self) -> tuple[str, ...]:
        return tuple(r for r, _ in self.rating_classes)

    def triangle(self, rating: str) -> CohortTriangle:
        for r, tri in self.rating_classes:
            if r == rating:
                return tri
        raise ValidationError(f"panel {self.year}: unknown rating {rating!r}")


def merge_cohorts(triangles: list[CohortTriangle]) -> CohortTriangle:
    """Fuse cohorts from several triangles into one, sorted by issue year.

    Issue years must be distinct across the inputs.
    """
    cohorts = [c for tri in triangles for c in tri.cohorts]
    years = [c.issue_year for c in cohorts]
    if len(set(years)) != len(years):
        dupes = sorted({y for y in years if years.count(y) > 1})
        raise ValidationError(f"duplicate issue years across triangles: {dupes}")
    cohorts.sort(key=lambda c: c.issue_year)
    max_h = max(tri.max_horizon for tri in triangles)
    return CohortTriangle(cohorts=tuple(cohorts), max_horizon=max_h)


def pool_panel(panel: PortfolioPanel) -> CohortRecord:
    """Collapse all rating classes of one vintage year into a single cohort.

    Exposures and per-horizon defaults are summed across ratings; the
    pooled cohort observes a horizon only when every rating does.
    """
    depth = min(c.depth for _, tri in panel.rating_classes for c in tri.cohorts)
    issued = 0
    defaults = [0] * depth
    for _, tri in panel.rating_classes:
        for c in tri.cohorts:
            issued += c.issued
            for t in range(1, depth + 1):
                defaults[t - 1] += c.defaults_at(t)
    return CohortRecord(
        issue_year=panel.year, issued=issued, cumulative_defaults=tuple(defaults)
    )
