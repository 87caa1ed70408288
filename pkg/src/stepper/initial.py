"""
Dirac-like initial data: mollified point masses and heat-kernel warm starts.
"""
import logging
import math
from typing import Tuple

import numpy as np
from scipy.special import erf

from ..grid import Field, Grid, integrate
from .config import InitialRecipe

logger = logging.getLogger(__name__)

# relative mass allowed outside the box before the domain counts as too small
TRUNCATION_TOL = 1e-6
RENORM_TOL = 1e-12


def _bump_profile(r: np.ndarray) -> np.ndarray:
    """exp(-1/(1 - r^2)) for r < 1, 0 elsewhere."""
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


def _box_overlap(centers: np.ndarray, h_cell: float, side: float) -> np.ndarray:
    """Fraction of each cell covered by [-side/2, side/2]."""
    lo = np.maximum(centers - 0.5 * h_cell, -0.5 * side)
    hi = np.minimum(centers + 0.5 * h_cell, 0.5 * side)
    return np.clip(hi - lo, 0.0, None) / h_cell


def _gaussian_outside(grid: Grid, std: float, center_n: float = 0.0) -> float:
    """Mass fraction of a unit gaussian (std per axis) outside the grid box."""
    inside = 1.0
    for axis, (lo, hi) in enumerate(zip(grid.low, grid.high)):
        c = center_n if axis == grid.dim - 1 else 0.0
        scale = std * math.sqrt(2.0)
        inside *= 0.5 * (erf((hi - c) / scale) - erf((lo - c) / scale))
    return 1.0 - inside


def _support_fits(grid: Grid, half_widths: Tuple[float, ...]) -> bool:
    return all(lo <= -w and w <= hi for lo, hi, w in zip(grid.low, grid.high, half_widths))


def make_initial(recipe: InitialRecipe, mass: float, grid: Grid) -> Field:
    """
    Sample an initial-data recipe and renormalize it to the given mass.

    Args:
        recipe: Recipe describing the shape
        mass: Target mass M (may be negative; 0 gives the zero field)
        grid: Grid to sample on

    Returns:
        Field with integrate(field) == mass up to rounding

    Raises:
        ValueError: If the recipe is narrower than two cells or the box
            cuts off more than a 1e-6 fraction of its mass
    """
    h_max = max(grid.spacing)
    if recipe.effective_width < 2.0 * h_max:
        raise ValueError(
            f"{recipe.kind} width {recipe.effective_width:.4g} is unresolvable on spacing {h_max:.4g} "
            f"(needs >= 2 dx)"
        )

    coords = grid.mesh()
    r2 = sum(c ** 2 for c in coords)
    h = recipe.width

    if recipe.kind == "gaussian":
        raw = np.exp(-0.5 * r2 / h ** 2)
        lost = _gaussian_outside(grid, h)
    elif recipe.kind == "heat_kernel":
        t0 = recipe.t0
        raw = (4.0 * math.pi * t0) ** (-0.5 * grid.dim) * np.exp(-r2 / (4.0 * t0))
        lost = _gaussian_outside(grid, math.sqrt(2.0 * t0))
    elif recipe.kind == "two_bumps":
        x_n = coords[-1]
        rp2 = r2 - x_n ** 2
        raw = np.exp(-0.5 * (rp2 + (x_n - recipe.offset) ** 2) / h ** 2)
        raw = raw + np.exp(-0.5 * (rp2 + (x_n + recipe.offset) ** 2) / h ** 2)
        lost = 0.5 * (_gaussian_outside(grid, h, recipe.offset) + _gaussian_outside(grid, h, -recipe.offset))
    elif recipe.kind == "bump":
        raw = _bump_profile(np.sqrt(r2) / h)
        lost = 0.0 if _support_fits(grid, (h,) * grid.dim) else 1.0
    else:
        raw = np.ones(())
        for axis, c in enumerate(coords):
            raw = raw * _box_overlap(c, grid.spacing[axis], h)
        lost = 0.0 if _support_fits(grid, (0.5 * h,) * grid.dim) else 1.0

    if lost > TRUNCATION_TOL:
        raise ValueError(
            f"{recipe.kind} datum loses a {lost:.3g} mass fraction outside the box "
            f"[{grid.low}, {grid.high}]; enlarge the domain"
        )

    shape = Field(grid, np.broadcast_to(raw, grid.shape))
    raw_mass = integrate(shape)
    if not raw_mass > 0:
        raise ValueError(f"{recipe.kind} datum has no mass on this grid")
    field = shape * (mass / raw_mass)

    achieved = integrate(field)
    if mass != 0 and abs(achieved - mass) > RENORM_TOL * abs(mass):
        raise ValueError(f"renormalized mass {achieved!r} differs from M = {mass!r}")
    logger.debug(f"Initial datum {recipe.kind} | width={recipe.effective_width:.4g} | M={mass}")
    return field
