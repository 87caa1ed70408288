"""
Self-similar scaling exponents.

Source-type solutions take the form u(t, x) = t^{-alpha} F(t^{-1/2} x', t^{-beta} x_N) with

    alpha = (N + 1) / (2q),   beta = (N + 1 - q (N - 1)) / (2q),   gamma = (N - 1)/2 + beta,

where gamma is the mass-preserving amplitude power of the scaling
u_lambda(x) = lambda^gamma u(lambda^{1/2} x', lambda^beta x_N). For N = 1 all three equal 1/q.
"""
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Exponents:
    """Scaling exponents of one (N, q) pair."""
    alpha: float
    beta: float
    gamma: float
    dim: int
    q: float

    def decay_slope(self, p: float) -> float:
        """Predicted log-log slope of ||u(t)||_p: -alpha (1 - 1/p)."""
        if not p >= 1:
            raise ValueError(f"p must be >= 1, got {p}")
        inverse = 0.0 if p == math.inf else 1.0 / p
        return -self.alpha * (1.0 - inverse)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma, "dim": self.dim, "q": self.q}


def exponents(dim: int, q: float) -> Exponents:
    """
    Exponents of the fast-convection scaling.

    Raises:
        ValueError: If q <= 1 - 1/N or dim is not positive
    """
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    if q <= 1.0 - 1.0 / dim:
        raise ValueError(f"q = {q} violates q > 1 - 1/N for N = {dim} (q <= 1 - 1/N)")
    alpha = (dim + 1) / (2.0 * q)
    beta = (dim + 1 - q * (dim - 1)) / (2.0 * q)
    gamma = 0.5 * (dim - 1) + beta
    return Exponents(alpha=alpha, beta=beta, gamma=gamma, dim=dim, q=q)


def diffusive_exponents(dim: int) -> Exponents:
    """Heat-equation scaling: alpha = gamma = N/2, beta = 1/2 (q recorded as 0)."""
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return Exponents(alpha=0.5 * dim, beta=0.5, gamma=0.5 * dim, dim=dim, q=0.0)
