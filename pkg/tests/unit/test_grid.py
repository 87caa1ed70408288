"""
Unit tests for grids, fields, functionals and snapshot files.
"""
import math

import numpy as np
import pytest

from src.errors import NonFiniteFieldError
from src.grid import (
    Field,
    Grid,
    boundary_mass,
    gradient_energy,
    integrate,
    lp_norm,
    marginal_xprime,
    negative_part_mass,
    primitive_xN,
    read_snapshot,
    resample,
    sample_at,
    second_moment_xN,
    shift_difference,
    tail_mass,
    write_snapshot,
)


@pytest.fixture
def line():
    """9 cells of width 0.25 centered on 0."""
    return Grid.symmetric([1.0], [0.25])


@pytest.fixture
def plane():
    return Grid.symmetric([1.0, 2.0], [0.5, 0.25])


class TestGrid:
    """Test Grid construction and geometry."""

    def test_symmetric_puts_origin_at_cell_center(self, line):
        assert line.cells == (9,)
        assert line.center_index == (4,)
        assert line.axis_centers(0)[4] == pytest.approx(0.0, abs=1e-15)

    def test_symmetric_covers_the_box(self, plane):
        assert plane.dim == 2
        for lo, hi, w in zip(plane.low, plane.high, [1.0, 2.0]):
            assert lo <= -w and hi >= w

    def test_dx_n_is_last_axis(self, plane):
        assert plane.dx_n == 0.25
        assert plane.cell_volume == pytest.approx(0.125)

    def test_rejects_off_center_origin(self):
        with pytest.raises(ValueError, match="cell center"):
            Grid((10,), (0.1,), (-0.5,))

    def test_rejects_too_few_cells(self):
        with pytest.raises(ValueError, match="at least"):
            Grid((3,), (0.1,), (-0.15,))

    def test_rejects_three_dimensions(self):
        with pytest.raises(ValueError, match="1 or 2"):
            Grid.symmetric([1.0, 1.0, 1.0], [0.5, 0.5, 0.5])

    def test_refined_keeps_box_and_center(self, line):
        fine = line.refined(2)
        assert fine.spacing == (0.125,)
        assert fine.axis_centers(0)[fine.center_index[0]] == pytest.approx(0.0, abs=1e-15)
        assert fine.contains_box(line)

    def test_subgrid_xprime(self, plane):
        sub = plane.subgrid_xprime()
        assert sub.cells == plane.cells[:1]
        with pytest.raises(ValueError):
            Grid.symmetric([1.0], [0.25]).subgrid_xprime()

    def test_dict_round_trip(self, plane):
        assert Grid.from_dict(plane.to_dict()) == plane


class TestField:
    """Test Field values and arithmetic."""

    def test_values_are_read_only(self, line):
        f = Field.constant(line, 1.0)
        with pytest.raises(ValueError):
            f.values[0] = 2.0

    def test_rejects_non_finite(self, line):
        values = np.zeros(line.shape)
        values[3] = np.nan
        with pytest.raises(NonFiniteFieldError):
            Field(line, values)

    def test_rejects_wrong_size(self, line):
        with pytest.raises(ValueError, match="expected"):
            Field(line, np.zeros(5))

    def test_arithmetic_and_parts(self, line):
        x = line.axis_centers(0)
        f = Field(line, x)
        assert np.array_equal((f - f).values, np.zeros(line.shape))
        assert np.array_equal((2.0 * f).values, 2.0 * x)
        assert f.positive_part().min == 0.0
        assert np.array_equal(f.positive_part().values - f.negative_part().values, x)

    def test_different_grids_do_not_mix(self, line):
        with pytest.raises(ValueError, match="different grids"):
            Field.zeros(line) + Field.zeros(line.refined(2))


class TestFunctionals:
    """Test integrals, norms and primitives."""

    def test_integrate_constant(self, plane):
        f = Field.constant(plane, 2.0)
        area = np.prod([hi - lo for lo, hi in zip(plane.low, plane.high)])
        assert integrate(f) == pytest.approx(2.0 * area)

    def test_lp_norms(self, line):
        values = np.zeros(line.shape)
        values[4] = -3.0
        f = Field(line, values)
        assert lp_norm(f, 1) == pytest.approx(0.75)
        assert lp_norm(f, 2) == pytest.approx(math.sqrt(9 * 0.25))
        assert lp_norm(f, 3) == pytest.approx((27 * 0.25) ** (1 / 3))
        assert lp_norm(f, math.inf) == 3.0
        with pytest.raises(ValueError):
            lp_norm(f, 0.5)

    def test_negative_part_mass(self, line):
        f = Field(line, np.linspace(-1.0, 1.0, 9))
        assert negative_part_mass(f) == pytest.approx(lp_norm(f.negative_part(), 1))

    def test_tail_mass(self, line):
        f = Field.constant(line, 1.0)
        assert tail_mass(f, 0.0) == pytest.approx(8 * 0.25)
        assert tail_mass(f, 10.0) == 0.0
        with pytest.raises(ValueError):
            tail_mass(f, -1.0)

    def test_tail_mass_nonincreasing_in_radius(self, plane):
        rng = np.random.default_rng(5)
        f = Field(plane, rng.standard_normal(plane.shape))
        tails = [tail_mass(f, r) for r in np.linspace(0.0, 3.0, 25)]
        assert all(b <= a for a, b in zip(tails, tails[1:]))
        assert tails[-1] == 0.0

    def test_lp_norm_triangle_inequality(self, plane):
        rng = np.random.default_rng(6)
        f = Field(plane, rng.standard_normal(plane.shape))
        g = Field(plane, rng.standard_normal(plane.shape))
        for p in (1, 1.5, 2, 4, math.inf):
            assert lp_norm(f + g, p) <= (lp_norm(f, p) + lp_norm(g, p)) * (1 + 1e-12)

    def test_boundary_mass_counts_outer_layer(self, plane):
        f = Field.constant(plane, 1.0)
        n0, n1 = plane.cells
        outer = n0 * n1 - (n0 - 2) * (n1 - 2)
        assert boundary_mass(f) == pytest.approx(outer * plane.cell_volume)

    def test_primitive_ends_with_line_integral(self, plane):
        rng = np.random.default_rng(3)
        f = Field(plane, rng.random(plane.shape))
        last = primitive_xN(f).values[..., -1]
        assert np.allclose(last, np.sum(f.values, axis=-1) * plane.dx_n)

    def test_marginal_matches_primitive(self, plane):
        rng = np.random.default_rng(4)
        f = Field(plane, rng.random(plane.shape))
        marginal = marginal_xprime(f)
        assert np.array_equal(marginal.values, primitive_xN(f).values[..., -1])
        assert integrate(marginal) == pytest.approx(integrate(f))

    def test_marginal_in_one_dimension_is_mass(self, line):
        f = Field.constant(line, 1.0)
        assert marginal_xprime(f) == pytest.approx(integrate(f))

    def test_second_moment_of_symmetric_pair(self, line):
        values = np.zeros(line.shape)
        values[[2, 6]] = 1.0
        assert second_moment_xN(Field(line, values)) == pytest.approx(0.25)

    def test_gradient_energy_of_linear_field(self, line):
        f = Field(line, 2.0 * line.axis_centers(0))
        # 8 interior faces, slope 2
        assert gradient_energy(f, [0]) == pytest.approx(8 * 4.0 * 0.25)

    def test_shift_difference(self, line):
        values = np.zeros(line.shape)
        values[4] = 1.0
        f = Field(line, values)
        assert shift_difference(f, 0) == 0.0
        assert shift_difference(f, 1) == pytest.approx(2 * 0.25)
        assert shift_difference(f, 100) == pytest.approx(0.25)


class TestInterpolation:
    """Test multilinear sampling and resampling."""

    def test_sample_linear_field_exactly(self, line):
        f = Field(line, line.axis_centers(0))
        points = np.array([-0.3, 0.1, 0.55])
        assert np.allclose(sample_at(f, [points]), points)

    def test_sample_outside_is_zero(self, line):
        f = Field.constant(line, 1.0)
        assert sample_at(f, [np.array([5.0])])[0] == 0.0

    def test_resample_onto_same_grid_is_identity(self, plane):
        rng = np.random.default_rng(5)
        f = Field(plane, rng.random(plane.shape))
        assert np.array_equal(resample(f, plane).values, f.values)

    def test_resample_bilinear_field(self, plane):
        f = Field.from_function(plane, lambda x, y: 1.0 + x - 2.0 * y)
        target = Grid.symmetric([0.5, 1.0], [0.25, 0.125])
        g = resample(f, target)
        x, y = target.mesh()
        assert np.allclose(g.values, 1.0 + x - 2.0 * y)

    def test_resample_dimension_mismatch(self, line, plane):
        with pytest.raises(ValueError):
            resample(Field.zeros(line), plane)


class TestSnapshot:
    """Test snapshot files."""

    def test_write_and_read(self, tmp_path, plane):
        rng = np.random.default_rng(6)
        f = Field(plane, rng.standard_normal(plane.shape))
        payload = write_snapshot(f, tmp_path / "snap_000", 0.5, "run-a", extra={"index": 0})
        g, meta = read_snapshot(payload)
        assert g.grid == plane
        assert np.array_equal(g.values, f.values)
        assert meta["time"] == 0.5
        assert meta["run_id"] == "run-a"
        assert meta["index"] == 0

    def test_payload_is_little_endian_row_major(self, tmp_path, plane):
        f = Field(plane, np.arange(plane.size, dtype=float))
        payload = write_snapshot(f, tmp_path / "s", 0.0, "r")
        raw = np.frombuffer(payload.read_bytes(), dtype="<f8")
        assert np.array_equal(raw, np.arange(plane.size, dtype=float))

    def test_missing_snapshot(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_snapshot(tmp_path / "nothing")

    def test_truncated_payload(self, tmp_path, line):
        payload = write_snapshot(Field.zeros(line), tmp_path / "s", 0.0, "r")
        payload.write_bytes(payload.read_bytes()[:16])
        with pytest.raises(ValueError, match="holds"):
            read_snapshot(tmp_path / "s")
