"""
Closed-form heat kernels used for warm starts and as oracles.
"""
import math
from typing import Sequence, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


def heat_kernel(t: float, x: Sequence[ArrayLike], dim: int) -> np.ndarray:
    """
    Gamma_dim(t, x) = (4 pi t)^{-dim/2} exp(-|x|^2 / (4t)).

    Args:
        t: Time (> 0)
        x: One coordinate array per axis (broadcastable)
        dim: Dimension, must match len(x)
    """
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    if len(x) != dim:
        raise ValueError(f"expected {dim} coordinate arrays, got {len(x)}")
    r2 = sum(np.asarray(c, dtype=np.float64) ** 2 for c in x)
    return (4.0 * math.pi * t) ** (-0.5 * dim) * np.exp(-r2 / (4.0 * t))


def heat_kernel_marginal(t: float, xprime: Sequence[ArrayLike], dim: int) -> ArrayLike:
    """
    Gamma_{N-1}(t, x') = t^{-(N-1)/2} F(t^{-1/2} x'), F(xi) = exp(-|xi|^2/4) / (4 pi)^{(N-1)/2}.

    For N = 1 there are no x' coordinates and the marginal is the constant 1.
    """
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    if dim == 1:
        return 1.0
    return heat_kernel(t, xprime, dim - 1)
