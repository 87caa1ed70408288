"""
Smooth compactly supported space-time test functions.

phi(t, x) = psi((t - t_c) / tau) * prod_a psi((x_a - c_a) / w_a),  psi(s) = exp(-1 / (1 - s^2)) on |s| < 1.
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..grid import Grid
from ..stepper import Trajectory


def psi(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def psi_prime(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    one_minus = 1.0 - si ** 2
    out[inside] = np.exp(-1.0 / one_minus) * (-2.0 * si / one_minus ** 2)
    return out


def psi_second(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    one_minus = 1.0 - si ** 2
    g = -2.0 * si / one_minus ** 2
    g_prime = -2.0 / one_minus ** 2 - 8.0 * si ** 2 / one_minus ** 3
    out[inside] = np.exp(-1.0 / one_minus) * (g * g + g_prime)
    return out


@dataclass(frozen=True)
class TestBump:
    """
    Tensor-product bump in space and time.

    Attributes:
        center: Spatial center per axis
        half_width: Spatial support radius per axis
        t_center: Temporal center
        t_half_width: Temporal support radius
    """
    __test__ = False

    center: Tuple[float, ...]
    half_width: Tuple[float, ...]
    t_center: float
    t_half_width: float

    def __post_init__(self):
        if len(self.center) != len(self.half_width):
            raise ValueError("center and half_width need one entry per axis")
        if any(not w > 0 for w in self.half_width) or not self.t_half_width > 0:
            raise ValueError("bump widths must be positive")

    @property
    def t_support(self) -> Tuple[float, float]:
        return self.t_center - self.t_half_width, self.t_center + self.t_half_width

    def time_factor(self, t: np.ndarray) -> np.ndarray:
        return psi((np.asarray(t, dtype=np.float64) - self.t_center) / self.t_half_width)

    def time_derivative(self, t: np.ndarray) -> np.ndarray:
        s = (np.asarray(t, dtype=np.float64) - self.t_center) / self.t_half_width
        return psi_prime(s) / self.t_half_width

    def space_factor(self, grid: Grid) -> np.ndarray:
        """Spatial factor at the cell centers, shaped like the grid."""
        out = np.ones(())
        for axis, c in enumerate(grid.mesh()):
            out = out * psi((c - self.center[axis]) / self.half_width[axis])
        return np.broadcast_to(out, grid.shape).copy()

    def space_derivative(self, grid: Grid, axis: int, order: int = 1) -> np.ndarray:
        """First or second derivative of the spatial factor along one axis."""
        derivative = psi_prime if order == 1 else psi_second
        out = np.ones(())
        for a, c in enumerate(grid.mesh()):
            s = (c - self.center[a]) / self.half_width[a]
            if a == axis:
                out = out * derivative(s) / self.half_width[a] ** order
            else:
                out = out * psi(s)
        return np.broadcast_to(out, grid.shape).copy()

    def inside(self, grid: Grid, t_lo: float, t_hi: float) -> bool:
        """True when the support lies in the box and in [t_lo, t_hi]."""
        lo, hi = self.t_support
        if lo < t_lo or hi > t_hi:
            return False
        return all(
            low <= c - w and c + w <= high
            for low, high, c, w in zip(grid.low, grid.high, self.center, self.half_width)
        )

    def describe(self) -> dict:
        return {
            "phi_center": ";".join(f"{c:g}" for c in self.center) + f"@t={self.t_center:g}",
            "phi_width": ";".join(f"{w:g}" for w in self.half_width) + f"@t={self.t_half_width:g}",
        }


def _active_extent(traj: Trajectory, axis: int, threshold: float) -> Tuple[float, float]:
    """Smallest interval along axis holding every cell with |u| > threshold * max|u|."""
    grid = traj.grid
    centers = grid.axis_centers(axis)
    peak = max(f.max_abs for f in traj.fields) or 1.0
    other_axes = tuple(a for a in range(grid.dim) if a != axis)
    active = np.zeros(grid.cells[axis], dtype=bool)
    for f in traj.fields:
        line = np.abs(f.values).max(axis=other_axes) if other_axes else np.abs(f.values)
        active |= line > threshold * peak
    if not active.any():
        return float(centers[0]), float(centers[-1])
    idx = np.flatnonzero(active)
    return float(centers[idx[0]]), float(centers[idx[-1]])


def default_bumps(traj: Trajectory, count: int = 20, threshold: float = 1e-3) -> List[TestBump]:
    """
    Bumps tiling the active part of the recorded space-time window.

    Two rows in time (one when count < 4) times ceil(count / rows) centers
    along x_N; x' is covered by one bump over its active extent. Widths are
    at least two cells and two time steps.
    """
    if count < 1:
        raise ValueError(f"need at least one bump, got {count}")
    grid = traj.grid
    t_lo, t_hi = traj.times[0], traj.times[-1]
    if not t_hi > t_lo:
        raise ValueError("trajectory holds a single time; no space-time bump fits")
    max_dt = float(np.max(np.diff(traj.times)))

    rows = 2 if count >= 4 else 1
    cols = math.ceil(count / rows)
    t_gap = (t_hi - t_lo) / (rows + 1)
    tau = max(0.99 * t_gap, 2.0 * max_dt)

    a, b = _active_extent(traj, grid.dim - 1, threshold)
    h_n = grid.dx_n
    w_n = max(2.0 * h_n, (b - a) / cols)
    w_n = min(w_n, 0.5 * (grid.high[-1] - grid.low[-1]) - h_n)
    n_lo, n_hi = grid.low[-1] + w_n, grid.high[-1] - w_n
    n_centers = np.linspace(a, b, cols) if cols > 1 else np.array([0.5 * (a + b)])
    n_centers = np.clip(n_centers, n_lo, n_hi)

    xprime_center, xprime_width = (), ()
    if grid.dim == 2:
        pa, pb = _active_extent(traj, 0, threshold)
        h0 = grid.spacing[0]
        w0 = max(2.0 * h0, 0.5 * (pb - pa) + 2.0 * h0)
        w0 = min(w0, 0.5 * (grid.high[0] - grid.low[0]) - h0)
        c0 = float(np.clip(0.5 * (pa + pb), grid.low[0] + w0, grid.high[0] - w0))
        xprime_center, xprime_width = (c0,), (w0,)

    bumps = []
    for j in range(rows):
        t_c = t_lo + (j + 1) * t_gap
        for c in n_centers:
            bumps.append(TestBump(xprime_center + (float(c),), xprime_width + (w_n,), t_c, tau))
            if len(bumps) == count:
                return bumps
    return bumps
