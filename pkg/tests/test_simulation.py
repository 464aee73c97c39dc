import dataclasses

import numpy as np
import pytest

from vintagepd.errors import ConfigError, DomainError
from vintagepd.simulation import (
    SimulationConfig,
    SweepAxis,
    draw_exposures,
    run_scenario,
    run_study,
    simulate_defaults,
    sweep,
)


def config(**overrides) -> SimulationConfig:
    defaults = dict(num_scenarios=2000, master_seed=20_240_101)
    defaults.update(overrides)
    return SimulationConfig(**defaults)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "bad",
        [
            dict(true_pd=-0.1),
            dict(true_pd=1.5),
            dict(sigma=-1e-9),
            dict(num_years=0),
            dict(exposure_min=0),
            dict(exposure_min=100, exposure_max=50),
            dict(num_scenarios=0),
            dict(horizons=0),
            dict(master_seed=2**64),
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            config(**bad)

    def test_defaults_mirror_the_reference_study(self):
        c = SimulationConfig()
        assert (c.true_pd, c.sigma) == (0.10, 0.001)
        assert (c.exposure_min, c.exposure_max) == (500, 10_000)
        assert c.num_scenarios == 100_000


class TestDrawExposures:
    def test_degenerate_interval(self):
        c = config(exposure_min=500, exposure_max=500, num_years=7)
        assert draw_exposures(c, 3) == (500,) * 7

    def test_deterministic_per_scenario(self):
        c = config()
        assert draw_exposures(c, 11) == draw_exposures(c, 11)
        assert draw_exposures(c, 11) != draw_exposures(c, 12)

    def test_uniform_mean(self):
        # Law-of-large-numbers check against the uniform mean 5250.
        c = config(num_years=100_000)
        mean = np.mean(draw_exposures(c, 0))
        assert abs(mean - 5250) / 5250 < 0.01

    def test_bounds_respected(self):
        c = config(exposure_min=500, exposure_max=10_000, num_years=1000)
        draws = draw_exposures(c, 5)
        assert min(draws) >= 500 and max(draws) <= 10_000


class TestSimulateDefaults:
    def test_no_noise_is_deterministic(self):
        assert simulate_defaults(0.10, 0.0, 1000, 123.0) == 100

    def test_negative_rate_clamps_to_zero(self):
        assert simulate_defaults(0.10, 0.1, 1000, -2.0) == 0

    def test_direct_evaluation(self):
        # (0.10 + 0.001) * 3518 = 355.318
        assert simulate_defaults(0.10, 0.001, 3518, 1.0) == 355

    def test_rounds_half_away_from_zero(self):
        assert simulate_defaults(0.25, 0.0, 10, 0.0) == 3

    def test_super_exposure_clamps(self):
        assert simulate_defaults(0.9, 1.0, 100, 5.0) == 100

    def test_requires_positive_exposure(self):
        with pytest.raises(DomainError):
            simulate_defaults(0.1, 0.0, 0, 0.0)


class TestRunScenario:
    def test_no_noise_collapses_both_estimators(self):
        c = config(sigma=0.0)
        draw = run_scenario(c, 0)
        for mr, rm in zip(draw.mr_estimate, draw.rm_estimate):
            assert mr == pytest.approx(0.10, abs=0.5 / 500)
            assert rm == pytest.approx(0.10, abs=0.5 / 500)

    def test_single_cohort_collapse(self):
        c = config(num_years=1)
        draw = run_scenario(c, 42)
        assert draw.mr_estimate == draw.rm_estimate

    def test_bit_identical_replay(self):
        c = config()
        assert run_scenario(c, 7) == run_scenario(c, 7)

    def test_counts_within_exposure(self):
        c = config(sigma=0.5)
        draw = run_scenario(c, 3)
        for n, row in zip(draw.exposures, draw.defaults):
            assert all(0 <= d <= n for d in row)

    def test_estimates_bounded_by_cohort_rates(self):
        c = config(sigma=0.05)
        for k in range(50):
            draw = run_scenario(c, k)
            rates = [
                [d / n for d in row] for n, row in zip(draw.exposures, draw.defaults)
            ]
            for t in range(c.horizons):
                col = [r[t] for r in rates]
                for est in (draw.mr_estimate[t], draw.rm_estimate[t]):
                    assert min(col) - 1e-12 <= est <= max(col) + 1e-12
                    assert 0.0 <= est <= 1.0

    def test_scenario_uses_draw_exposures_stream(self):
        c = config()
        assert run_scenario(c, 9).exposures == draw_exposures(c, 9)


class TestRunStudy:
    def test_zero_true_pd_is_out_of_domain(self):
        with pytest.raises(DomainError, match="relative RMSE"):
            run_study(config(true_pd=0.0))

    def test_no_noise_bounds_rmse_by_rounding(self):
        c = config(sigma=0.0, num_scenarios=500)
        report = run_study(c)
        bound = 0.5 / c.exposure_min / c.true_pd
        assert all(v <= bound for v in report.rmse_mr)
        assert all(v <= bound for v in report.rmse_rm)

    def test_equal_exposures_equalize_estimators(self):
        c = config(exposure_min=2000, exposure_max=2000, num_scenarios=500)
        report = run_study(c)
        for a, b in zip(report.rmse_mr, report.rmse_rm):
            assert a == pytest.approx(b, abs=1e-12)

    def test_independent_of_worker_count(self):
        c = config(num_scenarios=5000)
        assert run_study(c, workers=1) == run_study(c, workers=3)

    def test_means_near_truth(self):
        report = run_study(config(num_scenarios=5000))
        for m in report.mean_mr + report.mean_rm:
            assert m == pytest.approx(0.10, abs=0.001)


class TestSweep:
    def test_rmse_decreases_with_more_years(self):
        grid = sweep(config(num_scenarios=3000), SweepAxis.YEARS, [5, 20, 100])
        for t in range(5):
            mr = [r.rmse_mr[t] for r in grid.reports]
            rm = [r.rmse_rm[t] for r in grid.reports]
            se = [2 * (a.rmse_mr_se[t] + b.rmse_mr_se[t]) for a, b in zip(grid.reports, grid.reports[1:])]
            assert all(b <= a + s for a, b, s in zip(mr, mr[1:], se))
            assert all(b <= a + s for a, b, s in zip(rm, rm[1:], se))

    def test_single_sigma_point_without_noise(self):
        grid = sweep(config(num_scenarios=300), SweepAxis.SIGMA, [0.0])
        assert len(grid.reports) == 1
        # Without noise both estimators are exact up to integer rounding.
        bound = 0.5 / 500 / 0.10
        report = grid.reports[0]
        assert all(v <= bound for v in report.rmse_mr + report.rmse_rm)

    def test_validation(self):
        c = config(num_scenarios=100)
        with pytest.raises(ConfigError):
            sweep(c, "bogus", [1, 2])
        with pytest.raises(ConfigError):
            sweep(c, SweepAxis.SIGMA, [])
        with pytest.raises(ConfigError):
            sweep(c, SweepAxis.SIGMA, [0.3, 0.1])
        with pytest.raises(ConfigError):
            sweep(c, SweepAxis.SIGMA, [0.5, 1.5])
        with pytest.raises(ConfigError):
            sweep(c, SweepAxis.YEARS, [2.5, 3.5])

    def test_points_share_master_seed(self):
        grid = sweep(config(num_scenarios=200), SweepAxis.YEARS, [5, 10])
        assert {r.config.master_seed for r in grid.reports} == {20_240_101}


def test_config_is_frozen():
    c = config()
    with pytest.raises(dataclasses.FrozenInstanceError):
        c.sigma = 0.5
