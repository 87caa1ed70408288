"""
The convection nonlinearity f(u) = |u|^{q-1} u and its regularization

    f_eta(u) = (u^2 + eta)^{q/2} - eta^{q/2},

together with the Lipschitz bound that drives the CFL condition.
"""
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class FluxParams:
    """
    Flux configuration.

    Attributes:
        q: Convection exponent
        eta: Regularization parameter (>= 0); None defers to default_eta of the run grid
        odd_extension: Use sgn(s) f_eta(|s|) for negative s instead of the even formula
        enabled: Convection switch (False gives the pure diffusion equation)
        u_floor: Positive floor on |u| used by the CFL bound when eta = 0
    """
    q: float
    eta: Optional[float] = 0.0
    odd_extension: bool = True
    enabled: bool = True
    u_floor: Optional[float] = None

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError(f"flux exponent q must be positive, got {self.q}")
        if self.eta is not None and self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.u_floor is not None and not self.u_floor > 0:
            raise ValueError(f"u_floor must be positive, got {self.u_floor}")

    def validate(self, dim: int) -> None:
        """Check the mass-conservation range q > 1 - 1/N."""
        if self.q <= 1.0 - 1.0 / dim:
            raise ValueError(f"q = {self.q} violates q > 1 - 1/N for N = {dim} (q <= 1 - 1/N)")
        if self.enabled and self.eta == 0 and self.q < 1 and self.u_floor is None:
            raise ValueError("eta = 0 with q < 1 needs a positive u_floor for the CFL bound")

    def critical_points(self) -> tuple:
        """Interior extrema of the flux: s = 0 for the even formula, none otherwise."""
        if not self.enabled or self.odd_extension:
            return ()
        return (0.0,)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "FluxParams":
        return cls(**data)


def flux_exact(s: ArrayLike, p: FluxParams) -> ArrayLike:
    """f(s) = |s|^{q-1} s, with f(0) = 0."""
    s = np.asarray(s, dtype=np.float64)
    result = np.sign(s) * np.abs(s) ** p.q
    return float(result) if result.ndim == 0 else result


def flux_eta(s: ArrayLike, p: FluxParams) -> ArrayLike:
    """
    Regularized flux.

    For s >= 0 returns (s^2 + eta)^{q/2} - eta^{q/2}. For s < 0 returns
    -flux_eta(-s) with odd_extension, the even formula otherwise. With
    eta = 0 and odd_extension this is flux_exact. Disabled convection gives 0.
    """
    s = np.asarray(s, dtype=np.float64)
    if not p.enabled:
        result = np.zeros_like(s)
    else:
        half_q = 0.5 * p.q
        base = (s * s + p.eta) ** half_q - p.eta ** half_q
        result = np.sign(s) * base if p.odd_extension else base
    return float(result) if result.ndim == 0 else result


def flux_gap_bound(p: FluxParams) -> float:
    """sup_s |f(s) - f_eta(s)| <= eta^{q/2} (for q <= 2)."""
    return p.eta ** (0.5 * p.q)


def lipschitz_bound(p: FluxParams, umax: float) -> float:
    """
    Upper bound L on |f_eta'(s)| over |s| <= umax.

    Uses f_eta'(s) = q s (s^2 + eta)^{(q-2)/2}:
      q <= 1, eta > 0: L = q eta^{(q-1)/2}
      q <= 1, eta = 0: L = q u_floor^{q-1}
      q > 1:           L = q (umax^2 + eta)^{(q-1)/2}

    Args:
        p: Flux parameters
        umax: Bound on |u|

    Returns:
        The Lipschitz constant (0 when convection is disabled)
    """
    if not p.enabled:
        return 0.0
    q = p.q
    if q > 1:
        return q * (umax * umax + p.eta) ** (0.5 * (q - 1))
    if p.eta > 0:
        return q * p.eta ** (0.5 * (q - 1))
    if q == 1:
        return 1.0
    if p.u_floor is None:
        raise ValueError("eta = 0 needs a positive u_floor to bound the flux slope")
    return q * p.u_floor ** (q - 1)


def default_eta(dx_n: float) -> float:
    """Default regularization eta = (dx_N)^2."""
    return dx_n * dx_n

