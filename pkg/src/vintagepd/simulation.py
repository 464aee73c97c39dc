"""Seeded Monte Carlo study of the two estimators' statistical uncertainty.

Each scenario builds a square, fully observed triangle of T cohorts over
H horizons. Cohort exposures are drawn uniformly from a configured
range; defaults per (cohort, horizon) cell are

    d = clamp(round_half_away((p + sigma * eps) * N), 0, N)

with eps an independent standard-normal draw per cell. Both estimators
are evaluated per horizon and compared by relative RMSE, i.e.
sqrt(mean((estimate - p)^2)) / p.

Reproducibility contract
------------------------
Scenario k of a study with master seed s draws from a dedicated Philox
counter-based stream keyed by (s, k):

    numpy Philox4x64 with key = (master_seed, scenario_index)

consuming, in order, T uniform integers on [exposure_min, exposure_max]
and then T*H standard normals in cohort-major order. The RMSE reduction
accumulates per-scenario squared errors over fixed chunks of scenario
indices, so the result is bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DomainError

DEFAULT_MASTER_SEED = 987654321
_CHUNK = 2048


@dataclass(frozen=True)
class SimulationConfig:
    true_pd: float = 0.10
    sigma: float = 0.001
    num_years: int = 10
    exposure_min: int = 500
    exposure_max: int = 10_000
    num_scenarios: int = 100_000
    master_seed: int = DEFAULT_MASTER_SEED
    horizons: int = 5

    def __post_init__(self):
        if not 0.0 <= self.true_pd <= 1.0:
            raise ConfigError(f"true_pd must lie in [0, 1], got {self.true_pd}")
        if self.sigma < 0.0:
            raise ConfigError(f"sigma must be non-negative, got {self.sigma}")
        if self.num_years < 1:
            raise ConfigError(f"num_years must be at least 1, got {self.num_years}")
        if not 1 <= self.exposure_min <= self.exposure_max:
            raise ConfigError(
                f"exposure bounds must satisfy 1 <= min <= max, got "
                f"[{self.exposure_min}, {self.exposure_max}]"
            )
        if self.num_scenarios < 1:
            raise ConfigError(f"num_scenarios must be positive, got {self.num_scenarios}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")
        if self.horizons < 1:
            raise ConfigError(f"horizons must be at least 1, got {self.horizons}")


@dataclass(frozen=True)
class ScenarioDraw:
    """One simulated triangle plus both estimators' per-horizon estimates."""

    exposures: tuple[int, ...]
    defaults: tuple[tuple[int, ...], ...]  # [cohort][horizon]
    mr_estimate: tuple[float, ...]
    rm_estimate: tuple[float, ...]


@dataclass(frozen=True)
class RmseReport:
    """Per-horizon relative RMSE of each estimator, with Monte Carlo noise bands."""

    config: SimulationConfig
    rmse_mr: tuple[float, ...]
    rmse_rm: tuple[float, ...]
    efficiency_ratio: tuple[float, ...]  # rmse_mr / rmse_rm
    mean_mr: tuple[float, ...]
    mean_rm: tuple[float, ...]
    rmse_mr_se: tuple[float, ...]
    rmse_rm_se: tuple[float, ...]


class SweepAxis:
    SIGMA = "sigma"
    YEARS = "years"


@dataclass(frozen=True)
class SweepGrid:
    axis: str
    values: tuple[float, ...]
    reports: tuple[RmseReport, ...] = field(default_factory=tuple)


def _scenario_rng(config: SimulationConfig, scenario_index: int) -> np.random.Generator:
    key = (config.master_seed, int(scenario_index))
    return np.random.Generator(np.random.Philox(key=key))


def draw_exposures(config: SimulationConfig, scenario_index: int) -> tuple[int, ...]:
    """Cohort sizes for one scenario: T uniform integers on [min, max]."""
    rng = _scenario_rng(config, scenario_index)
    draws = rng.integers(config.exposure_min, config.exposure_max + 1, size=config.num_years)
    return tuple(int(n) for n in draws)


def simulate_defaults(p: float, sigma: float, exposure: int, noise: float) -> int:
    """Default count of one cell: (p + sigma*noise)*N, rounded then clamped.

    Rounding is half away from zero; clamping keeps the count in [0, N].
    """
    if exposure < 1:
        raise DomainError(f"exposure must be at least 1, got {exposure}")
    x = (p + sigma * noise) * exposure
    rounded = math.floor(abs(x) + 0.5) * (1 if x >= 0 else -1)
    return min(max(rounded, 0), exposure)


def _scenario_matrices(
    config: SimulationConfig, scenario_index: int
) -> tuple[np.ndarray, np.ndarray]:
    """Exposures (T,) and defaults (T, H) for one scenario, vectorized."""
    rng = _scenario_rng(config, scenario_index)
    exposures = rng.integers(
        config.exposure_min, config.exposure_max + 1, size=config.num_years
    )
    noise = rng.standard_normal((config.num_years, config.horizons))
    x = (config.true_pd + config.sigma * noise) * exposures[:, None]
    rounded = np.sign(x) * np.floor(np.abs(x) + 0.5)
    defaults = np.clip(rounded, 0, exposures[:, None]).astype(np.int64)
    return exposures, defaults


def _estimates(exposures: np.ndarray, defaults: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rates = defaults / exposures[:, None]
    mr = rates.mean(axis=0)
    rm = defaults.sum(axis=0) / exposures.sum()
    return mr, rm


def run_scenario(config: SimulationConfig, scenario_index: int) -> ScenarioDraw:
    """Simulate one scenario and evaluate both estimators per horizon."""
    exposures, defaults = _scenario_matrices(config, scenario_index)
    mr, rm = _estimates(exposures, defaults)
    return ScenarioDraw(
        exposures=tuple(int(n) for n in exposures),
        defaults=tuple(tuple(int(d) for d in row) for row in defaults),
        mr_estimate=tuple(float(v) for v in mr),
        rm_estimate=tuple(float(v) for v in rm),
    )


def _chunk_sums(args: tuple[SimulationConfig, int, int]) -> np.ndarray:
    """Accumulate error moments for scenario indices [start, stop).

    Returns a (6, H) array of sums: squared error and its square per
    estimator (for the RMSE and its standard error), plus the plain
    estimate sums for the scenario means.
    """
    config, start, stop = args
    h = config.horizons
    acc = np.zeros((6, h))
    p = config.true_pd
    for k in range(start, stop):
        exposures, defaults = _scenario_matrices(config, k)
        mr, rm = _estimates(exposures, defaults)
        e_mr = (mr - p) ** 2
        e_rm = (rm - p) ** 2
        acc[0] += e_mr
        acc[1] += e_rm
        acc[2] += e_mr**2
        acc[3] += e_rm**2
        acc[4] += mr
        acc[5] += rm
    return acc


def run_study(config: SimulationConfig, workers: int = 1) -> RmseReport:
    """Relative RMSE of both estimators over num_scenarios scenarios.

    Scenarios are reduced in fixed chunks of scenario indices and the
    chunk partials are combined in index order, so the report is
    bit-identical for any worker count.
    """
    if config.true_pd == 0.0:
        raise DomainError("relative RMSE is undefined when true_pd is 0")
    n = config.num_scenarios
    chunks = [(config, s, min(s + _CHUNK, n)) for s in range(0, n, _CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_chunk_sums, chunks, chunksize=4))
    else:
        partials = [_chunk_sums(c) for c in chunks]
    acc = np.zeros((6, config.horizons))
    for part in partials:
        acc += part

    p = config.true_pd
    mse_mr, mse_rm = acc[0] / n, acc[1] / n
    rmse_mr = np.sqrt(mse_mr) / p
    rmse_rm = np.sqrt(mse_rm) / p
    # Delta method: se(rmse) = se(mse) / (2 * sqrt(mse)), in relative units.
    var_mse_mr = np.maximum(acc[2] / n - mse_mr**2, 0.0)
    var_mse_rm = np.maximum(acc[3] / n - mse_rm**2, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        se_mr = np.where(
            mse_mr > 0, np.sqrt(var_mse_mr / n) / (2 * np.sqrt(mse_mr)) / p, 0.0
        )
        se_rm = np.where(
            mse_rm > 0, np.sqrt(var_mse_rm / n) / (2 * np.sqrt(mse_rm)) / p, 0.0
        )
        ratio = np.where(rmse_rm > 0, rmse_mr / rmse_rm, np.nan)
    return RmseReport(
        config=config,
        rmse_mr=tuple(float(v) for v in rmse_mr),
        rmse_rm=tuple(float(v) for v in rmse_rm),
        efficiency_ratio=tuple(float(v) for v in ratio),
        mean_mr=tuple(float(v) for v in acc[4] / n),
        mean_rm=tuple(float(v) for v in acc[5] / n),
        rmse_mr_se=tuple(float(v) for v in se_mr),
        rmse_rm_se=tuple(float(v) for v in se_rm),
    )


def sweep(
    config: SimulationConfig, axis: str, values: list[float], workers: int = 1
) -> SweepGrid:
    """One run_study per axis point, all sharing the config's master seed."""
    if axis not in (SweepAxis.SIGMA, SweepAxis.YEARS):
        raise ConfigError(f"unknown sweep axis {axis!r}")
    if not values:
        raise ConfigError("sweep needs at least one axis value")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("sweep values must be strictly increasing")
    reports = []
    for v in values:
        if axis == SweepAxis.SIGMA:
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"sigma value {v} outside [0, 1]")
            point = replace(config, sigma=float(v))
        else:
            if v < 1 or v != int(v):
                raise ConfigError(f"years value {v} must be a positive integer")
            point = replace(config, num_years=int(v))
        reports.append(run_study(point, workers=workers))
    return SweepGrid(axis=axis, values=tuple(float(v) for v in values), reports=tuple(reports))
