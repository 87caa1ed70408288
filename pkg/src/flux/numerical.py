"""
Monotone finite-volume convection along x_N.

Interface fluxes use the Godunov characterization

    F(a, b) = min_{s in [a, b]} f(s)   if a <= b
              max_{s in [b, a]} f(s)   if a >  b

evaluated exactly for piecewise-monotone fluxes by comparing the end points
with the interior critical points of f. For the nondecreasing f_eta this is
the upwind flux f_eta(a).
"""
import numpy as np

from ..grid import Field
from .params import ArrayLike, FluxParams, flux_eta


def numerical_flux(a: ArrayLike, b: ArrayLike, p: FluxParams) -> ArrayLike:
    """
    Godunov flux F(a, b) for the regularized flux.

    Args:
        a: Left state(s)
        b: Right state(s)
        p: Flux parameters

    Returns:
        Interface flux, scalar or array like the broadcast of a and b
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    fa = np.asarray(flux_eta(a, p))
    fb = np.asarray(flux_eta(b, p))
    lower = np.minimum(fa, fb)
    upper = np.maximum(fa, fb)
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    for c in p.critical_points():
        fc = flux_eta(c, p)
        inside = (lo <= c) & (c <= hi)
        lower = np.where(inside, np.minimum(lower, fc), lower)
        upper = np.where(inside, np.maximum(upper, fc), upper)
    result = np.where(a <= b, lower, upper)
    return float(result) if result.ndim == 0 else result


def entropy_flux(a: ArrayLike, b: ArrayLike, k: float, p: FluxParams) -> ArrayLike:
    """Crandall-Majda numerical entropy flux Q_k(a, b) = F(a v k, b v k) - F(a ^ k, b ^ k)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    upper = numerical_flux(np.maximum(a, k), np.maximum(b, k), p)
    lower = numerical_flux(np.minimum(a, k), np.minimum(b, k), p)
    return np.asarray(upper) - np.asarray(lower) if np.ndim(upper) else float(upper - lower)


def face_fluxes(values: np.ndarray, p: FluxParams) -> np.ndarray:
    """
    Interface fluxes along the last axis, zero on the two boundary faces.

    Returns:
        Array with one more entry than values along the last axis
    """
    shape = values.shape[:-1] + (values.shape[-1] + 1,)
    faces = np.zeros(shape)
    faces[..., 1:-1] = numerical_flux(values[..., :-1], values[..., 1:], p)
    return faces


def entropy_face_fluxes(values: np.ndarray, k: float, p: FluxParams) -> np.ndarray:
    """Numerical entropy fluxes Q_k on every face, zero on the boundary faces."""
    shape = values.shape[:-1] + (values.shape[-1] + 1,)
    faces = np.zeros(shape)
    faces[..., 1:-1] = entropy_flux(values[..., :-1], values[..., 1:], k, p)
    return faces


def convection_divergence(f: Field, p: FluxParams) -> Field:
    """
    Discrete d/dx_N f_eta(u): (F_{i+1/2} - F_{i-1/2}) / dx_N per cell.

    Args:
        f: Field to differentiate
        p: Flux parameters

    Returns:
        Field of divergences on f.grid
    """
    faces = face_fluxes(f.values, p)
    return Field(f.grid, np.diff(faces, axis=-1) / f.grid.dx_n)
