"""
Cross-run checks on pairs of trajectories sharing one discretization.

All comparisons are cellwise on identical grids and snapshot schedules;
nothing is resampled, so every tolerance reflects solver error only.
"""
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..grid import integrate, lp_norm, primitive_xN
from ..stepper import Trajectory, same_discretization
from .records import CheckRecord, at_most, worst_increase

logger = logging.getLogger(__name__)


@dataclass
class RunPair:
    """Two trajectories (u, u_bar) on identical grids, operators, fluxes and schedules."""
    first: Trajectory
    second: Trajectory

    def __post_init__(self):
        if not same_discretization(self.first.config, self.second.config):
            raise ValueError(f"runs {self.first.run_id} and {self.second.run_id} differ in discretization")
        if not self.first.snapshot_times_match(self.second):
            raise ValueError(
                f"misaligned schedules: {len(self.first.times)} vs {len(self.second.times)} snapshots"
            )

    @property
    def times(self):
        return self.first.times

    @property
    def steps(self) -> int:
        return max(self.first.steps, self.second.steps)

    @property
    def lin_tol(self) -> float:
        return self.first.config.lin_tol

    @property
    def scale(self) -> float:
        """Mass scale max(||u_0||_1, ||u_bar_0||_1) used to turn lin_tol into an absolute tolerance."""
        return max(lp_norm(self.first.initial, 1), lp_norm(self.second.initial, 1), 1e-300)

    def label(self) -> str:
        return f"{self.first.run_id}~{self.second.run_id}"


def contraction_series(pair: RunPair) -> pd.Series:
    """||u(t) - u_bar(t)||_1 at every snapshot time."""
    values = [lp_norm(a - b, 1) for a, b in zip(pair.first.fields, pair.second.fields)]
    return pd.Series(values, index=pair.times, name="l1_distance")


def contraction_check(pair: RunPair) -> CheckRecord:
    """The distance series is nonincreasing up to 2 * steps * lin_tol."""
    series = contraction_series(pair)
    tol = 2.0 * max(pair.steps, 1) * pair.lin_tol * pair.scale
    return at_most(
        f"contraction[{pair.label()}]",
        worst_increase(series.to_numpy()),
        tol,
        "2 * steps * lin_tol * mass scale",
        start=float(series.iloc[0]),
        end=float(series.iloc[-1]),
    )


def mass_difference_series(pair: RunPair) -> pd.Series:
    """integrate(u(t)) - integrate(u_bar(t)) at every snapshot time (conserved)."""
    values = [integrate(a) - integrate(b) for a, b in zip(pair.first.fields, pair.second.fields)]
    return pd.Series(values, index=pair.times, name="mass_difference")


def mass_difference_check(pair: RunPair) -> CheckRecord:
    series = mass_difference_series(pair).to_numpy()
    drift = float(np.max(np.abs(series - series[0])))
    return at_most(
        f"mass_difference[{pair.label()}]",
        drift,
        max(pair.steps, 1) * pair.lin_tol * pair.scale,
        "steps * lin_tol * mass scale",
    )


def comparison_check(pair: RunPair) -> float:
    """
    Worst violation max_t max_cells (u - u_bar)^+ of the comparison principle.

    Raises:
        ValueError: If u_0 <= u_bar_0 fails somewhere
    """
    if np.any(pair.first.initial.values > pair.second.initial.values):
        raise ValueError(f"comparison needs u_0 <= u_bar_0 cellwise ({pair.label()})")
    worst = 0.0
    for a, b in zip(pair.first.fields, pair.second.fields):
        worst = max(worst, float(np.max(a.values - b.values)))
    return worst


def comparison_record(pair: RunPair) -> CheckRecord:
    return at_most(
        f"comparison[{pair.label()}]",
        comparison_check(pair),
        max(pair.steps, 1) * pair.lin_tol * pair.scale,
        "steps * lin_tol * mass scale",
    )


def _primitive_at(faces: np.ndarray, primitive: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Piecewise-linear primitive along x_N evaluated at shifted face positions, line by line."""
    lines = primitive.reshape(-1, primitive.shape[-1])
    out = np.empty_like(lines)
    for i, line in enumerate(lines):
        nodes = np.concatenate(([0.0], line))
        out[i] = np.interp(positions, faces, nodes, left=0.0, right=line[-1])
    return out.reshape(primitive.shape)


def primitive_sandwich(pair: RunPair, r: float, support_tol: float = 1e-12) -> float:
    """
    Worst violation of v(t, x', x_N - 2r) <= v_bar(t, x', x_N) <= v(t, x', x_N + 2r).

    v, v_bar are the x_N-primitives of u, u_bar, read at the right face of
    every cell; shifted values come from linear interpolation of the
    primitive between faces.

    Raises:
        ValueError: If either initial datum has mass outside |x_N| <= r
    """
    if not r > 0:
        raise ValueError(f"sandwich radius must be positive, got {r}")
    grid = pair.first.grid
    x_n = grid.axis_centers(grid.dim - 1)
    outside = np.abs(x_n) > r + 0.5 * grid.dx_n
    for traj in (pair.first, pair.second):
        leak = float(np.sum(np.abs(traj.initial.values[..., outside]))) * grid.cell_volume
        if leak > support_tol * pair.scale:
            raise ValueError(f"initial datum of {traj.run_id} has mass {leak:.3e} outside |x_N| <= {r}")

    faces = grid.low[-1] + np.arange(grid.cells[-1] + 1) * grid.dx_n
    right_faces = faces[1:]
    worst = 0.0
    for a, b in zip(pair.first.fields, pair.second.fields):
        v = primitive_xN(a).values
        v_bar = primitive_xN(b).values
        lower = _primitive_at(faces, v, right_faces - 2.0 * r)
        upper = _primitive_at(faces, v, right_faces + 2.0 * r)
        worst = max(worst, float(np.max(lower - v_bar)), float(np.max(v_bar - upper)))
    return max(worst, 0.0)
