"""FastAPI service exposing estimation and simulation over HTTP.

Endpoints:

* ``POST /estimate`` — parse a triangle or panel file and return PD
  curves, optional per-rating curves, roll-ups, and the MR-minus-RM
  difference in basis points.
* ``POST /simulate`` — run the seeded Monte Carlo RMSE study.
* ``POST /sweep`` — run one study per axis point (sigma or years).
* ``GET /health`` — liveness plus artifact version.

Validation errors in input data map to 422; configuration errors to
400; anything else to 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .dataio import parse_panel, parse_triangle
from .errors import ConfigError, DomainError, ValidationError
from .estimators import (
    Estimator,
    Rollup,
    aggregate_by_rating,
    curve_difference,
    pd_curve,
    portfolio_rollup,
)
from .schemas import (
    EstimateRequest,
    EstimateResponse,
    HealthResponse,
    PdCurveModel,
    RmseReportModel,
    RollupCurveModel,
    SimulateRequest,
    SweepGridModel,
    SweepRequest,
)
from .simulation import run_study, sweep

app = FastAPI(title="vintagepd", version=__version__)


@app.exception_handler(ValidationError)
async def _validation_error(request: Request, exc: ValidationError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(ConfigError)
async def _config_error(request: Request, exc: ConfigError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse()


def _detect_kind(content: str) -> str:
    first = content.lstrip().split("\n", 1)[0].lower()
    return "panel" if "rating" in first else "triangle"


def _estimators(which: str) -> list[Estimator]:
    if which == "mr":
        return [Estimator.MEAN_OF_RATIOS]
    if which == "rm":
        return [Estimator.RATIO_OF_MEANS]
    return [Estimator.MEAN_OF_RATIOS, Estimator.RATIO_OF_MEANS]


def _rollups(which: str) -> list[Rollup]:
    if which == "pooled":
        return [Rollup.POOLED_TOTALS]
    if which == "mean-over-ratings":
        return [Rollup.MEAN_OVER_RATINGS]
    if which == "both":
        return [Rollup.POOLED_TOTALS, Rollup.MEAN_OVER_RATINGS]
    return []


@app.post("/estimate", response_model=EstimateResponse)
def estimate(req: EstimateRequest) -> EstimateResponse:
    kind = req.kind if req.kind != "auto" else _detect_kind(req.content)
    estimators = _estimators(req.estimator)

    if kind == "triangle":
        triangle = parse_triangle(req.content, lenient_thousands=req.lenient_thousands)
        curves = [pd_curve(triangle, est) for est in estimators]
        per_rating = None
        rollups: list[RollupCurveModel] = []
    else:
        panels = parse_panel(req.content, lenient_thousands=req.lenient_thousands)
        # The headline curve of a panel is the pooled-totals roll-up.
        curves = [
            portfolio_rollup(panels, est, Rollup.POOLED_TOTALS) for est in estimators
        ]
        per_rating = None
        if req.by_rating:
            per_rating = {}
            for est in estimators:
                for rating, curve in aggregate_by_rating(panels, est).items():
                    per_rating.setdefault(rating, []).append(PdCurveModel.from_curve(curve))
        rollups = [
            RollupCurveModel(
                rollup=r.value,
                curve=PdCurveModel.from_curve(portfolio_rollup(panels, est, r)),
            )
            for est in estimators
            for r in _rollups(req.rollup)
        ]

    difference = None
    if len(curves) == 2:
        difference = curve_difference(curves[0], curves[1])

    return EstimateResponse(
        kind=kind,
        curves=[PdCurveModel.from_curve(c) for c in curves],
        per_rating=per_rating,
        rollups=rollups,
        difference_bp=difference,
    )


@app.post("/simulate", response_model=RmseReportModel)
def simulate(req: SimulateRequest) -> RmseReportModel:
    report = run_study(req.config.to_config(), workers=req.workers)
    return RmseReportModel.from_report(report)


@app.post("/sweep", response_model=SweepGridModel)
def run_sweep(req: SweepRequest) -> SweepGridModel:
    grid = sweep(req.config.to_config(), req.axis, req.values, workers=req.workers)
    return SweepGridModel.from_grid(grid)
