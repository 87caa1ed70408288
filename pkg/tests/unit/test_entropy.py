"""
Unit tests for test bumps and the Kruzhkov entropy audit.
"""
import math

import numpy as np
import pytest

from src.entropy import (
    TestBump,
    audit,
    cell_entropy_check,
    default_bumps,
    entropy_levels,
    kruzhkov_residual,
    psi,
    psi_prime,
    psi_second,
    time_reversed,
)
from src.flux import FluxParams
from src.grid import Grid
from src.stepper import InitialRecipe, OperatorChoice, RunConfig, cell_entropy_production, run


@pytest.fixture(scope="module")
def recorded():
    """Box datum recorded at every step."""
    cfg = RunConfig(
        grid=Grid.symmetric([3.0], [0.05]),
        flux=FluxParams(q=0.75, eta=None),
        initial=InitialRecipe("box", width=1.0),
        t_end=0.1,
        record_steps=True,
        run_id="recorded",
    )
    return run(cfg)


@pytest.fixture(scope="module")
def shock():
    """Pure conservation law (reduced operator in 1D) from a box: a shock at the left edge."""
    cfg = RunConfig(
        grid=Grid.symmetric([3.0], [0.05]),
        operator=OperatorChoice("reduced"),
        flux=FluxParams(q=0.75, eta=None),
        initial=InitialRecipe("box", width=1.0),
        t_end=0.3,
        record_steps=True,
        run_id="shock",
    )
    return run(cfg)


class TestPsi:
    """Test the 1D mollifier and its derivatives."""

    def test_support_and_peak(self):
        assert psi(np.array([0.0]))[0] == pytest.approx(math.exp(-1.0))
        assert np.all(psi(np.array([-1.0, 1.0, 1.5, -3.0])) == 0.0)

    def test_derivatives_match_finite_differences(self):
        s = np.linspace(-0.8, 0.8, 20001)
        h = s[1] - s[0]
        assert np.allclose(np.gradient(psi(s), h)[1:-1], psi_prime(s)[1:-1], atol=1e-5)
        assert np.allclose(np.gradient(psi_prime(s), h)[1:-1], psi_second(s)[1:-1], atol=1e-4)


class TestTestBump:
    """Test space-time bumps."""

    def test_validation(self):
        with pytest.raises(ValueError):
            TestBump((0.0,), (0.0,), 0.5, 0.1)
        with pytest.raises(ValueError):
            TestBump((0.0, 0.0), (1.0,), 0.5, 0.1)

    def test_time_derivative(self):
        bump = TestBump((0.0,), (1.0,), 0.5, 0.2)
        t = np.linspace(0.34, 0.66, 4001)
        numeric = np.gradient(bump.time_factor(t), t[1] - t[0])
        assert np.allclose(numeric[1:-1], bump.time_derivative(t)[1:-1], atol=1e-3)

    def test_second_space_derivative(self):
        grid = Grid.symmetric([2.0], [0.001])
        bump = TestBump((0.3,), (1.0,), 0.5, 0.2)
        space = bump.space_factor(grid)
        numeric = (space[2:] - 2.0 * space[1:-1] + space[:-2]) / 0.001 ** 2
        assert np.allclose(numeric, bump.space_derivative(grid, 0, order=2)[1:-1], atol=1e-2)

    def test_inside(self):
        grid = Grid.symmetric([2.0], [0.1])
        assert TestBump((0.0,), (1.0,), 0.5, 0.2).inside(grid, 0.0, 1.0)
        assert not TestBump((1.5,), (1.0,), 0.5, 0.2).inside(grid, 0.0, 1.0)
        assert not TestBump((0.0,), (1.0,), 0.9, 0.2).inside(grid, 0.0, 1.0)

    def test_default_bumps_fit_the_window(self, recorded):
        bumps = default_bumps(recorded, 20)
        assert len(bumps) == 20
        for bump in bumps:
            assert bump.inside(recorded.grid, recorded.times[0], recorded.times[-1])
            assert bump.half_width[0] >= 2 * recorded.grid.dx_n

    def test_default_bumps_needs_a_window(self, recorded):
        with pytest.raises(ValueError):
            default_bumps(recorded, 0)


class TestAudit:
    """Test the residual audit on scheme trajectories."""

    def test_levels_include_zero(self, recorded):
        levels = entropy_levels(recorded, 8)
        assert 0.0 in levels
        assert levels == sorted(levels)
        assert len(levels) >= 8

    def test_scheme_trajectory_passes(self, recorded):
        result = audit(recorded, levels=entropy_levels(recorded, 8), bumps=default_bumps(recorded, 6))
        assert result.passed
        assert result.residuals.shape == (len(result.levels), 6)
        assert result.cell_min >= -1e-13
        assert len(result.table()) == result.residuals.size
        assert result.summary()["passed"] is True

    def test_residual_is_weighted_cell_production(self, recorded):
        bump = default_bumps(recorded, 4)[0]
        k = 0.3
        grid, cfg = recorded.grid, recorded.config
        expected = 0.0
        for n in range(len(recorded.times) - 1):
            dt = recorded.times[n + 1] - recorded.times[n]
            production = cell_entropy_production(recorded.fields[n], recorded.fields[n + 1], dt, cfg, k)
            weight = bump.time_factor(recorded.times[n + 1]) * bump.space_factor(grid)
            expected += float(np.sum(weight * production))
        assert kruzhkov_residual(recorded, k, bump) == pytest.approx(expected, rel=1e-9, abs=1e-14)

    def test_cell_check_nonnegative(self, recorded):
        for k in (0.0, 0.5, 1.0):
            assert cell_entropy_check(recorded, k) >= -1e-13

    def test_time_reversed_run_fails(self, recorded):
        backwards = time_reversed(recorded)
        assert backwards.times == pytest.approx(recorded.times)
        result = audit(backwards, levels=entropy_levels(backwards, 8), bumps=default_bumps(backwards, 6))
        assert not result.passed

    def test_requires_every_step(self):
        cfg = RunConfig(
            grid=Grid.symmetric([3.0], [0.05]),
            flux=FluxParams(q=0.75, eta=None),
            initial=InitialRecipe("box", width=1.0),
            t_end=0.05,
        )
        with pytest.raises(ValueError, match="record_steps"):
            audit(run(cfg))

    def test_rejects_bump_outside_window(self, recorded):
        with pytest.raises(ValueError, match="leaves"):
            kruzhkov_residual(recorded, 0.0, TestBump((0.0,), (1.0,), 0.5, 0.2))

    def test_transfer_bound_scales_with_eta(self, recorded):
        result = audit(recorded, levels=[0.0], bumps=default_bumps(recorded, 2), with_cell_check=False)
        assert result.flux_gap == pytest.approx(recorded.config.flux.eta ** (0.75 / 2))
        assert result.transfer_bound > 0
        assert result.cell_min is None

    def test_shock_run_passes_forward(self, shock):
        result = audit(shock, levels=entropy_levels(shock, 32), bumps=default_bumps(shock, 20))
        assert len(result.levels) >= 32
        assert len(result.bumps) == 20
        assert result.passed
        assert result.min_residual >= -1e-6 * shock.config.mass
        assert result.cell_min >= -1e-8 * shock.config.mass

    def test_shock_run_fails_reversed(self, shock):
        backwards = time_reversed(shock)
        result = audit(backwards, levels=entropy_levels(backwards, 32), bumps=default_bumps(backwards, 20))
        assert not result.passed
        assert result.min_residual < -1e-6 * shock.config.mass
