"""
Scaling transforms u_lambda(x) = lambda^gamma u(lambda^{1/2} x', lambda^beta x_N).
"""
from typing import Sequence, Tuple

import numpy as np

from ..grid import Field, Grid, sample_at
from .exponents import Exponents

# cells with |u| above this fraction of max|u| count as support
SUPPORT_THRESHOLD = 1e-6


def axis_scales(lam: float, e: Exponents, dim: int) -> Tuple[float, ...]:
    """Coordinate stretch per axis: lambda^{1/2} on x', lambda^beta on x_N."""
    return (lam ** 0.5,) * (dim - 1) + (lam ** e.beta,)


def support_box(f: Field, threshold: float = SUPPORT_THRESHOLD) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Bounding box (cell faces) of the cells with |u| > threshold * max|u|."""
    grid = f.grid
    a = np.abs(f.values)
    peak = a.max()
    if peak == 0:
        return grid.low, grid.high
    mask = a > threshold * peak
    low, high = [], []
    for axis in range(grid.dim):
        other = tuple(x for x in range(grid.dim) if x != axis)
        line = mask.any(axis=other) if other else mask
        idx = np.flatnonzero(line)
        centers = grid.axis_centers(axis)
        h = grid.spacing[axis]
        low.append(float(centers[idx[0]] - 0.5 * h))
        high.append(float(centers[idx[-1]] + 0.5 * h))
    return tuple(low), tuple(high)


def scale_transform(f: Field, lam: float, e: Exponents, target: Grid) -> Field:
    """
    Sample u_lambda on target.

    Args:
        f: Field u
        lam: Scale lambda > 0
        e: Exponents (beta, gamma are used)
        target: Grid for the result

    Returns:
        Field on target; its mass equals that of f up to interpolation error

    Raises:
        ValueError: If target misses part of the rescaled support
    """
    if not lam > 0:
        raise ValueError(f"scale must be positive, got {lam}")
    if target.dim != f.grid.dim:
        raise ValueError(f"cannot rescale a {f.grid.dim}D field onto a {target.dim}D grid")
    scales = axis_scales(lam, e, f.grid.dim)

    low, high = support_box(f)
    for axis, (lo, hi, s) in enumerate(zip(low, high, scales)):
        slack = target.spacing[axis]
        if lo / s < target.low[axis] - slack or hi / s > target.high[axis] + slack:
            raise ValueError(
                f"target grid misses the rescaled support on axis {axis}: "
                f"[{lo / s:.4g}, {hi / s:.4g}] vs [{target.low[axis]:.4g}, {target.high[axis]:.4g}]"
            )

    points = [c * s for c, s in zip(target.mesh(), scales)]
    return Field(target, lam ** e.gamma * sample_at(f, points))


def rescale(f: Field, t: float, e: Exponents, target: Grid) -> Field:
    """Profile map t^alpha u(t, t^{1/2} xi', t^beta xi_N), i.e. scale_transform with lambda = t."""
    if not t > 0:
        raise ValueError(f"rescale needs t > 0, got {t}")
    return scale_transform(f, t, e, target)


def profile_grid(fields: Sequence[Field], times: Sequence[float], e: Exponents, max_cells: int = 4096) -> Grid:
    """
    A grid in profile coordinates covering the rescaled supports of all fields.

    The spacing is the coarsest rescaled source spacing, capped so that no
    axis exceeds max_cells cells.
    """
    dim = fields[0].grid.dim
    low = [0.0] * dim
    high = [0.0] * dim
    spacing = [0.0] * dim
    for f, t in zip(fields, times):
        scales = axis_scales(t, e, dim)
        lo, hi = support_box(f)
        for axis in range(dim):
            low[axis] = min(low[axis], lo[axis] / scales[axis])
            high[axis] = max(high[axis], hi[axis] / scales[axis])
            spacing[axis] = max(spacing[axis], f.grid.spacing[axis] / scales[axis])
    for axis in range(dim):
        low[axis] = min(low[axis], -spacing[axis]) - spacing[axis]
        high[axis] = max(high[axis], spacing[axis]) + spacing[axis]
        width = high[axis] - low[axis]
        spacing[axis] = max(spacing[axis], width / max_cells)
    return Grid.from_bounds(low, high, spacing)
