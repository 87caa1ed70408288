"""
Unit tests for exponents, heat kernels, rescaling and decay fits.
"""
import math

import numpy as np
import pandas as pd
import pytest
from scipy import integrate as quadrature

from src.grid import Field, Grid, integrate
from src.selfsim import (
    collapse_distance,
    decay_fit,
    decay_fit_row,
    default_window,
    diffusive_exponents,
    exponents,
    heat_kernel,
    heat_kernel_marginal,
    initial_time_scale,
    moment_exponent_fit,
    profile_grid,
    rescale,
    scale_transform,
    support_box,
)
from src.stepper import InitialRecipe, RunConfig, Trajectory


def _synthetic(grid, times, field_for, series_for=None):
    """Trajectory with prescribed snapshots and series columns."""
    cfg = RunConfig(grid=grid, initial=InitialRecipe("gaussian", width=0.5), t_end=float(times[-1]))
    fields = [field_for(t) for t in times]
    frame = pd.DataFrame({"time": times})
    for name, func in (series_for or {}).items():
        frame[name] = [func(t) for t in times]
    return Trajectory(config=cfg, times=list(times), fields=fields, series=frame, steps=len(times) - 1)


@pytest.fixture
def line():
    return Grid.symmetric([2.0], [0.1])


class TestExponents:
    """Test the scaling exponents."""

    def test_one_dimension(self):
        e = exponents(1, 0.75)
        assert e.alpha == pytest.approx(4 / 3)
        assert e.beta == pytest.approx(4 / 3)
        assert e.gamma == pytest.approx(4 / 3)
        assert e.decay_slope(math.inf) == pytest.approx(-4 / 3)
        assert e.decay_slope(2) == pytest.approx(-2 / 3)
        assert e.decay_slope(1) == 0.0

    def test_two_dimensions(self):
        e = exponents(2, 0.8)
        assert e.alpha == pytest.approx(1.875)
        assert e.beta == pytest.approx(1.375)
        assert e.gamma == pytest.approx(e.alpha)

    def test_convection_dominates_diffusion(self):
        for dim, q in ((1, 0.75), (2, 0.8), (2, 0.6)):
            assert exponents(dim, q).alpha > diffusive_exponents(dim).alpha

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="1 - 1/N"):
            exponents(2, 0.4)
        with pytest.raises(ValueError):
            exponents(0, 0.75)
        with pytest.raises(ValueError):
            exponents(1, 0.75).decay_slope(0.5)


class TestKernels:
    """Test the closed-form heat kernels."""

    @pytest.mark.parametrize("t", [0.01, 1.0, 7.5])
    def test_unit_mass(self, t):
        reach = 40.0 * math.sqrt(t)
        mass, _ = quadrature.quad(lambda x: heat_kernel(t, [x], 1), -reach, reach)
        assert mass == pytest.approx(1.0, rel=1e-10)

    def test_marginal_of_two_dimensional_kernel(self):
        t = 0.7
        for xp in (0.0, 0.5, -1.3):
            line, _ = quadrature.quad(lambda xn: heat_kernel(t, [xp, xn], 2), -40.0, 40.0)
            assert line == pytest.approx(float(heat_kernel_marginal(t, [xp], 2)), rel=1e-9)
        assert heat_kernel_marginal(t, [], 1) == 1.0

    def test_rejects_nonpositive_time(self):
        with pytest.raises(ValueError):
            heat_kernel(0.0, [0.0], 1)
        with pytest.raises(ValueError):
            heat_kernel(1.0, [0.0], 2)


class TestRescaling:
    """Test scaling transforms and profile grids."""

    def test_support_box(self, line):
        values = np.zeros(line.shape)
        values[15:25] = 1.0
        low, high = support_box(Field(line, values))
        centers = line.axis_centers(0)
        assert low[0] == pytest.approx(centers[15] - 0.05)
        assert high[0] == pytest.approx(centers[24] + 0.05)

    def test_heat_kernel_collapses_under_diffusive_scaling(self):
        source = Grid.symmetric([30.0], [0.02])
        gamma4 = Field.from_function(source, lambda x: heat_kernel(4.0, [x], 1))
        target = Grid.symmetric([15.0], [0.05])
        profile = rescale(gamma4, 4.0, diffusive_exponents(1), target)
        expected = Field.from_function(target, lambda x: heat_kernel(1.0, [x], 1))
        assert np.max(np.abs(profile.values - expected.values)) < 1e-4

    def test_scale_transform_preserves_mass(self, line):
        source = Grid.symmetric([10.0], [0.01])
        f = Field.from_function(source, lambda x: np.exp(-x ** 2))
        e = exponents(1, 0.75)
        target = Grid.symmetric([10.0], [0.01])
        g = scale_transform(f, 2.0, e, target)
        assert integrate(g) == pytest.approx(integrate(f), rel=1e-3)

    def test_scale_transforms_compose(self):
        grid = Grid.symmetric([10.0], [0.01])
        f = Field.from_function(grid, lambda x: np.exp(-x ** 2))
        e = exponents(1, 0.75)
        composed = scale_transform(scale_transform(f, 2.0, e, grid), 1.5, e, grid)
        direct = scale_transform(f, 3.0, e, grid)
        peak = np.max(np.abs(direct.values))
        assert np.max(np.abs(composed.values - direct.values)) <= 1e-3 * peak

    def test_target_must_cover_support(self):
        source = Grid.symmetric([10.0], [0.05])
        f = Field.from_function(source, lambda x: np.exp(-x ** 2))
        with pytest.raises(ValueError, match="misses"):
            scale_transform(f, 0.01, exponents(1, 0.75), Grid.symmetric([1.0], [0.05]))
        with pytest.raises(ValueError):
            rescale(f, 0.0, exponents(1, 0.75), source)

    def test_profile_grid_covers_rescaled_supports(self):
        source = Grid.symmetric([10.0], [0.05])
        f = Field.from_function(source, lambda x: np.exp(-x ** 2))
        e = exponents(1, 0.75)
        grid = profile_grid([f, f], [1.0, 4.0], e)
        low, high = support_box(f)
        assert grid.low[0] <= low[0] and grid.high[0] >= high[0]
        assert grid.cells[0] <= 4096 + 2


class TestFits:
    """Test decay and moment fits on trajectories with exact rates."""

    def test_series_decay_fit(self, line):
        times = np.geomspace(0.1, 100.0, 40)
        traj = _synthetic(line, times, lambda t: Field.zeros(line),
                          {"l2": lambda t: 3.0 * t ** (-2 / 3), "linf": lambda t: t ** (-4 / 3)})
        slope, stderr = decay_fit(traj, 2, 1.0, 100.0)
        assert slope == pytest.approx(-2 / 3, rel=1e-9)
        assert stderr < 1e-9
        row = decay_fit_row(traj, math.inf, exponents(1, 0.75), 0.05, 1.0, 100.0)
        assert row["passed"] and row["p"] == "inf"

    def test_snapshot_decay_fit_for_other_norms(self, line):
        times = np.geomspace(1.0, 100.0, 12)
        traj = _synthetic(line, times, lambda t: Field.constant(line, 1.0 / t))
        slope, _ = decay_fit(traj, 3, 1.0, 100.0)
        assert slope == pytest.approx(-1.0, rel=1e-9)

    def test_insufficient_range(self, line):
        times = np.geomspace(1.0, 5.0, 20)
        traj = _synthetic(line, times, lambda t: Field.zeros(line), {"l2": lambda t: t ** -0.5})
        with pytest.raises(ValueError, match="dynamic range"):
            decay_fit(traj, 2, 1.0, 5.0)
        few = _synthetic(line, np.geomspace(1.0, 100.0, 5), lambda t: Field.zeros(line), {"l2": lambda t: t})
        with pytest.raises(ValueError, match="dynamic range"):
            decay_fit(few, 2, 1.0, 100.0)

    def test_moment_exponent(self, line):
        times = np.geomspace(0.5, 50.0, 30)
        traj = _synthetic(line, times, lambda t: Field.zeros(line),
                          {"second_moment_xN": lambda t: t ** (8 / 3)})
        exponent, _ = moment_exponent_fit(traj, 0.5, 50.0)
        assert exponent == pytest.approx(4 / 3, rel=1e-9)

    def test_initial_time_scale_and_window(self, line):
        cfg = RunConfig(grid=Grid.symmetric([5.0], [0.05]), initial=InitialRecipe("heat_kernel", t0=0.02))
        assert initial_time_scale(cfg) == 0.02
        assert initial_time_scale(cfg.with_changes(initial=InitialRecipe("gaussian", 0.4))) == pytest.approx(0.08)
        traj = _synthetic(line, [0.0, 1.0, 2.0], lambda t: Field.zeros(line))
        assert default_window(traj) == (pytest.approx(1.25), 2.0)


class TestCollapse:
    """Test profile-collapse distances."""

    def test_self_similar_family_collapses(self):
        grid = Grid.symmetric([40.0], [0.02])
        traj = _synthetic(grid, [1.0, 4.0], lambda t: Field.from_function(grid, lambda x: heat_kernel(t, [x], 1)))
        matched = collapse_distance(traj, diffusive_exponents(1), 1.0, 4.0)
        mismatched = collapse_distance(traj, exponents(1, 0.75), 1.0, 4.0)
        assert matched < 5e-3
        assert mismatched > 10 * matched

    def test_time_order(self):
        grid = Grid.symmetric([5.0], [0.05])
        traj = _synthetic(grid, [1.0, 2.0], lambda t: Field.zeros(grid))
        with pytest.raises(ValueError):
            collapse_distance(traj, exponents(1, 0.75), 2.0, 1.0)
