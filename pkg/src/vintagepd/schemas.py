"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from . import __version__
from .estimators import PdCurve
from .simulation import RmseReport, SimulationConfig, SweepGrid


class CurvePointModel(BaseModel):
    horizon: int
    rate: float
    cohorts_used: int


class PdCurveModel(BaseModel):
    estimator: Literal["mr", "rm"]
    points: list[CurvePointModel]

    @classmethod
    def from_curve(cls, curve: PdCurve) -> "PdCurveModel":
        return cls(
            estimator=curve.estimator.value,
            points=[
                CurvePointModel(
                    horizon=t, rate=p.rate, cohorts_used=p.cohorts_used
                )
                for t, p in sorted(curve.points.items())
            ],
        )


class EstimateRequest(BaseModel):
    content: str = Field(description="Raw triangle or panel file content")
    kind: Literal["triangle", "panel", "auto"] = "auto"
    estimator: Literal["mr", "rm", "both"] = "both"
    by_rating: bool = False
    rollup: Literal["pooled", "mean-over-ratings", "both", "none"] = "none"
    lenient_thousands: bool = False


class RollupCurveModel(BaseModel):
    rollup: Literal["pooled", "mean-over-ratings"]
    curve: PdCurveModel


class EstimateResponse(BaseModel):
    kind: Literal["triangle", "panel"]
    curves: list[PdCurveModel]
    per_rating: Optional[dict[str, list[PdCurveModel]]] = None
    rollups: list[RollupCurveModel] = []
    difference_bp: Optional[dict[int, float]] = None  # MR minus RM


class SimulationConfigModel(BaseModel):
    true_pd: float = 0.10
    sigma: float = 0.001
    num_years: int = 10
    exposure_min: int = 500
    exposure_max: int = 10_000
    num_scenarios: int = 100_000
    master_seed: int = Field(default_factory=lambda: SimulationConfig().master_seed)
    horizons: int = 5

    def to_config(self) -> SimulationConfig:
        return SimulationConfig(**self.model_dump())


class SimulateRequest(BaseModel):
    config: SimulationConfigModel = SimulationConfigModel()
    workers: int = 1


class RmseReportModel(BaseModel):
    config: SimulationConfigModel
    rmse_mr: list[float]
    rmse_rm: list[float]
    efficiency_ratio: list[float]
    mean_mr: list[float]
    mean_rm: list[float]
    rmse_mr_se: list[float]
    rmse_rm_se: list[float]

    @classmethod
    def from_report(cls, report: RmseReport) -> "RmseReportModel":
        return cls(
            config=SimulationConfigModel(**vars(report.config)),
            rmse_mr=list(report.rmse_mr),
            rmse_rm=list(report.rmse_rm),
            efficiency_ratio=list(report.efficiency_ratio),
            mean_mr=list(report.mean_mr),
            mean_rm=list(report.mean_rm),
            rmse_mr_se=list(report.rmse_mr_se),
            rmse_rm_se=list(report.rmse_rm_se),
        )


class SweepRequest(BaseModel):
    config: SimulationConfigModel = SimulationConfigModel()
    axis: Literal["sigma", "years"]
    values: list[float]
    workers: int = 1


class SweepGridModel(BaseModel):
    axis: Literal["sigma", "years"]
    values: list[float]
    reports: list[RmseReportModel]

    @classmethod
    def from_grid(cls, grid: SweepGrid) -> "SweepGridModel":
        return cls(
            axis=grid.axis,
            values=list(grid.values),
            reports=[RmseReportModel.from_report(r) for r in grid.reports],
        )


class HealthResponse(BaseModel):
    status: Literal["ok"] = "ok"
    version: str = __version__
