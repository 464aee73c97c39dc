"""Multiperiod probability-of-default estimation from cohort default triangles.

Core pieces:

* :mod:`vintagepd.triangles` — cohort triangles and portfolio panels.
* :mod:`vintagepd.estimators` — Mean of Ratios / Ratio of Means and roll-ups.
* :mod:`vintagepd.simulation` — seeded Monte Carlo RMSE comparison.
* :mod:`vintagepd.dataio` — delimited ingestion and report tables.
* :mod:`vintagepd.service` — FastAPI app wrapping the above.
* :mod:`vintagepd.cli` — thin command-line client for the service.
"""

__version__ = "0.1.0"

from .estimators import (
    Estimator,
    PdCurve,
    Rollup,
    aggregate_by_rating,
    curve_difference,
    default_rate,
    mean_of_ratios,
    pd_curve,
    portfolio_rollup,
    ratio_of_means,
)
from .simulation import (
    DEFAULT_MASTER_SEED,
    RmseReport,
    ScenarioDraw,
    SimulationConfig,
    SweepGrid,
    draw_exposures,
    run_scenario,
    run_study,
    simulate_defaults,
    sweep,
)
from .triangles import CohortRecord, CohortTriangle, PortfolioPanel

__all__ = [
    "__version__",
    "CohortRecord",
    "CohortTriangle",
    "PortfolioPanel",
    "Estimator",
    "Rollup",
    "PdCurve",
    "default_rate",
    "mean_of_ratios",
    "ratio_of_means",
    "pd_curve",
    "aggregate_by_rating",
    "portfolio_rollup",
    "curve_difference",
    "SimulationConfig",
    "ScenarioDraw",
    "RmseReport",
    "SweepGrid",
    "DEFAULT_MASTER_SEED",
    "draw_exposures",
    "simulate_defaults",
    "run_scenario",
    "run_study",
    "sweep",
]
