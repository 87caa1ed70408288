"""
Convection flux module.

This module provides:
- The exact flux |u|^{q-1} u and its eta-regularization
- The CFL Lipschitz bound
- The monotone (Godunov) numerical flux and its entropy flux
- The discrete convection divergence along x_N
"""

from .params import (
    FluxParams,
    flux_exact,
    flux_eta,
    flux_gap_bound,
    lipschitz_bound,
    default_eta,
)
from .numerical import (
    numerical_flux,
    entropy_flux,
    face_fluxes,
    entropy_face_fluxes,
    convection_divergence,
)

__all__ = [
    # Parameters
    "FluxParams",
    "default_eta",

    # Pointwise fluxes
    "flux_exact",
    "flux_eta",
    "flux_gap_bound",
    "lipschitz_bound",

    # Finite-volume fluxes
    "numerical_flux",
    "entropy_flux",
    "face_fluxes",
    "entropy_face_fluxes",
    "convection_divergence",
]
