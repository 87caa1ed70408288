"""
Integrals, norms, primitives and interpolation on uniform grids.

All reductions go through numpy's pairwise summation over a fixed memory
order, so repeated evaluation on identical data is bit-identical.
"""
import logging
import math
from typing import Sequence, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .mesh import Field, Grid

logger = logging.getLogger(__name__)


def integrate(f: Field) -> float:
    """Mass: sum of the cell averages times the cell volume."""
    return float(np.sum(f.values) * f.grid.cell_volume)


def lp_norm(f: Field, p: float) -> float:
    """
    Discrete L^p norm with cell-volume weights.

    Args:
        f: Field to measure
        p: Exponent in [1, inf]; math.inf gives max |value|

    Returns:
        The norm
    """
    if p == math.inf:
        return f.max_abs
    if not p >= 1:
        raise ValueError(f"L^p norm needs p >= 1, got p={p}")
    a = np.abs(f.values)
    if p == 1:
        return float(np.sum(a) * f.grid.cell_volume)
    if p == 2:
        return float(math.sqrt(np.sum(a * a) * f.grid.cell_volume))
    return float((np.sum(a ** p) * f.grid.cell_volume) ** (1.0 / p))


def tail_mass(f: Field, r: float) -> float:
    """Sum of |value| * volume over cells whose center satisfies |x| > r."""
    if r < 0:
        raise ValueError(f"tail radius must be nonnegative, got {r}")
    outside = f.grid.radius() > r
    return float(np.sum(np.abs(f.values) * outside) * f.grid.cell_volume)


def negative_part_mass(f: Field) -> float:
    """||f^-||_1."""
    return float(np.sum(np.maximum(-f.values, 0.0)) * f.grid.cell_volume)


def boundary_mass(f: Field) -> float:
    """Mass of |f| held by the outermost layer of cells on every face of the box."""
    mask = np.zeros(f.grid.shape, dtype=bool)
    for axis in range(f.grid.dim):
        index = [slice(None)] * f.grid.dim
        index[axis] = 0
        mask[tuple(index)] = True
        index[axis] = -1
        mask[tuple(index)] = True
    return float(np.sum(np.abs(f.values) * mask) * f.grid.cell_volume)


def primitive_xN(f: Field) -> Field:
    """
    Cumulative integral along x_N on every x'-line.

    The entry of cell j is the integral of u over (-inf, x_{j+1/2}); the last
    entry of a line is the line integral.
    """
    return Field(f.grid, np.cumsum(f.values, axis=-1) * f.grid.dx_n)


def marginal_xprime(f: Field) -> Union[Field, float]:
    """
    Line integrals along x_N.

    Returns:
        A Field on the x' sub-grid for dim 2, the scalar mass for dim 1
    """
    if f.grid.dim == 1:
        return integrate(f)
    # same ordering as the last slice of primitive_xN
    lines = np.cumsum(f.values, axis=-1)[..., -1] * f.grid.dx_n
    return Field(f.grid.subgrid_xprime(), lines)


def second_moment_xN(f: Field) -> float:
    """Variance of |f| along x_N (about its own mean)."""
    weights = np.abs(f.values)
    total = np.sum(weights)
    if total == 0:
        return 0.0
    x_n = f.grid.axis_centers(f.grid.dim - 1)
    line = np.sum(weights.reshape(-1, f.grid.cells[-1]), axis=0)
    mean = np.sum(line * x_n) / total
    return float(np.sum(line * (x_n - mean) ** 2) / total)


def sample_at(f: Field, points: Sequence[np.ndarray]) -> np.ndarray:
    """
    Multilinear interpolation of cell-center values at arbitrary points.

    A ghost layer of zeros one cell beyond each face lets values fall off
    linearly through the boundary half cell; beyond it the result is 0.

    Args:
        f: Source field
        points: One coordinate array per axis (broadcastable to each other)

    Returns:
        Interpolated values with the broadcast shape of points
    """
    grid = f.grid
    axes = []
    for a in range(grid.dim):
        c = grid.axis_centers(a)
        h = grid.spacing[a]
        axes.append(np.concatenate(([c[0] - h], c, [c[-1] + h])))
    padded = np.pad(f.values, 1, mode="constant", constant_values=0.0)
    interpolator = RegularGridInterpolator(
        tuple(axes), padded, method="linear", bounds_error=False, fill_value=0.0
    )
    coords = np.broadcast_arrays(*points)
    shape = coords[0].shape
    stacked = np.stack([c.ravel() for c in coords], axis=-1)
    return interpolator(stacked).reshape(shape)


def resample(f: Field, target: Grid) -> Field:
    """
    Multilinear resampling of f onto target.

    Args:
        f: Source field
        target: Grid whose box lies inside the source box (one cell of slack)

    Returns:
        Field on target
    """
    if target.dim != f.grid.dim:
        raise ValueError(f"cannot resample a {f.grid.dim}D field onto a {target.dim}D grid")
    if not f.grid.contains_box(target):
        logger.warning("resample target box exceeds the source box; outside values are 0")
    if target == f.grid:
        return Field(target, f.values)
    return Field(target, sample_at(f, target.mesh()))


def gradient_energy(f: Field, axes: Sequence[int]) -> float:
    """
    Discrete squared gradient norm over the given axes.

    Sum over interior faces of ((u_{i+1} - u_i)/h)^2 times the cell volume;
    this is the Dirichlet form of the Neumann 3-point Laplacian.
    """
    total = 0.0
    for axis in axes:
        d = np.diff(f.values, axis=axis) / f.grid.spacing[axis]
        total += float(np.sum(d * d))
    return total * f.grid.cell_volume


def shift_difference(f: Field, shift_cells: int) -> float:
    """
    Integral of |u(x + (0, xi_N)) - u(x)| with xi_N = shift_cells * dx_N.

    Values shifted in from outside the box are 0.
    """
    n = f.grid.cells[-1]
    s = int(shift_cells)
    shifted = np.zeros_like(f.values)
    if abs(s) < n:
        if s >= 0:
            shifted[..., : n - s] = f.values[..., s:]
        else:
            shifted[..., -s:] = f.values[..., : n + s]
    return float(np.sum(np.abs(shifted - f.values)) * f.grid.cell_volume)
