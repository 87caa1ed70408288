"""
A posteriori Kruzhkov entropy audit of recorded trajectories.

For a level k and a nonnegative test function phi the entropy inequality of
u_t + L u + d/dx_N f(u) = 0 reads

    R(k, phi) = int int |u - k| phi_t + sgn(u - k)(f(u) - f(k)) phi_{x_N} - |u - k| L phi  dx dt >= 0.

The quadrature below is the summation-by-parts form of the scheme's cell
entropy balance: time differences of phi against |u^n - k|, the numerical
entropy flux Q_k^n against face differences of phi^{n+1}, and |u^{n+1} - k|
against the operator stencil applied to phi^{n+1}. For a trajectory of the
scheme (theta = 1) it equals sum_n sum_i phi_i^{n+1} P_i^n and is therefore
nonnegative up to the linear-solver tolerance.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..flux import entropy_face_fluxes, flux_gap_bound
from ..grid import Field, Grid, integrate, lp_norm
from ..stepper import Trajectory, apply_operator, cell_entropy_production
from .bumps import TestBump, default_bumps

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 32
DEFAULT_TOL = 1e-6


def _require_full_stride(traj: Trajectory) -> None:
    if not traj.has_full_stride():
        raise ValueError(
            f"run {traj.run_id} keeps {len(traj.times)} snapshots for {traj.steps} steps; "
            f"entropy checks need every step (record_steps=True)"
        )


def entropy_levels(traj: Trajectory, count: int = DEFAULT_LEVELS) -> List[float]:
    """count equispaced levels over the observed value range, plus k = 0."""
    lo = min(f.min for f in traj.fields)
    hi = max(f.max for f in traj.fields)
    levels = set(float(k) for k in np.linspace(lo, hi, count)) | {0.0}
    return sorted(levels)


def _stack(traj: Trajectory) -> np.ndarray:
    return np.stack([f.values for f in traj.fields])


def _bump_parts(bump: TestBump, grid: Grid, times: np.ndarray, weights: Sequence[float]):
    space = bump.space_factor(grid)
    grad_n = np.diff(space, axis=-1) / grid.dx_n
    stencil = apply_operator(space, grid, weights)
    return bump.time_factor(times), space, grad_n, stencil


def _residuals_for_level(traj: Trajectory, k: float, bumps: Sequence[TestBump],
                         values: Optional[np.ndarray] = None) -> np.ndarray:
    """Residual R(k, phi_b) for every bump, vectorized over steps."""
    grid = traj.grid
    cfg = traj.config
    times = np.asarray(traj.times)
    dts = np.diff(times)
    values = _stack(traj) if values is None else values
    n_snap = values.shape[0]

    distance = np.abs(values - k).reshape(n_snap, -1)
    q_faces = entropy_face_fluxes(values[:-1], k, cfg.flux)[..., 1:-1].reshape(n_snap - 1, -1)

    out = np.empty(len(bumps))
    for b, bump in enumerate(bumps):
        t_factor, space, grad_n, stencil = _bump_parts(bump, grid, times, cfg.diffusion_weights)
        time_term = np.diff(t_factor) * (distance[:-1] @ space.ravel())
        flux_term = t_factor[1:] * dts * (q_faces @ grad_n.ravel())
        diffusion_term = t_factor[1:] * dts * (distance[1:] @ stencil.ravel())
        out[b] = math.fsum(time_term + flux_term - diffusion_term) * grid.cell_volume
    return out


def kruzhkov_residual(traj: Trajectory, k: float, phi: TestBump) -> float:
    """
    Quadrature of the entropy inequality's left side for one (k, phi).

    A nonnegative value certifies the inequality for this pair.

    Raises:
        ValueError: If phi leaves the recorded window or the run was not recorded at every step
    """
    _require_full_stride(traj)
    if not phi.inside(traj.grid, traj.times[0], traj.times[-1]):
        raise ValueError(f"test bump {phi.describe()} leaves the recorded space-time window")
    return float(_residuals_for_level(traj, k, [phi])[0])


def cell_entropy_check(traj: Trajectory, k: float) -> float:
    """
    Most negative per-cell entropy production over all recorded steps.

    Raises:
        ValueError: If the run was not recorded at every step
    """
    _require_full_stride(traj)
    worst = math.inf
    for (t0, f0), (t1, f1) in zip(zip(traj.times, traj.fields), zip(traj.times[1:], traj.fields[1:])):
        worst = min(worst, float(cell_entropy_production(f0, f1, t1 - t0, traj.config, k).min()))
    return 0.0 if worst == math.inf else worst


def time_reversed(traj: Trajectory) -> Trajectory:
    """
    The trajectory replayed backwards with x_N mirrored: v(t, x', x_N) = u(T - t, x', -x_N).

    Time reversal plus mirroring keeps the convection term's form, so the
    result is again a weak solution of the transport part but with every
    admissible shock turned into an expansion shock.
    """
    grid = traj.grid
    mirrored = Grid(grid.cells, grid.spacing, grid.origin[:-1] + (-grid.high[-1],))
    t_first, t_last = traj.times[0], traj.times[-1]
    cfg = traj.config.with_changes(grid=mirrored, snapshot_times=(), initial_field=None,
                                   run_id=f"{traj.run_id}-reversed")
    fields = [Field(mirrored, f.values[..., ::-1]) for f in reversed(traj.fields)]
    times = [t_first + (t_last - t) for t in reversed(traj.times)]
    return Trajectory(config=cfg, times=times, fields=fields, steps=traj.steps, wall_time=0.0)


@dataclass
class EntropyAudit:
    """
    Audit outcome.

    Attributes:
        run_id: Audited run
        levels: Levels k
        bumps: Test functions
        residuals: R(k, phi), shape (len(levels), len(bumps))
        tol: Pass threshold (residual >= -tol)
        flux_gap: sup |f - f_eta| = eta^{q/2}
        transfer_bound: 2 eta^{q/2} max_b int int |d phi_b / dx_N|, the shift of R when f_eta is replaced by f
        cell_min: Most negative cell entropy production at k = 0 (None if not evaluated)
    """
    run_id: str
    levels: List[float]
    bumps: List[TestBump]
    residuals: np.ndarray
    tol: float
    flux_gap: float
    transfer_bound: float
    cell_min: Optional[float] = None

    def __post_init__(self):
        expected = (len(self.levels), len(self.bumps))
        if self.residuals.shape != expected:
            raise ValueError(f"residual table shaped {self.residuals.shape}, expected {expected}")

    @property
    def min_residual(self) -> float:
        return float(self.residuals.min()) if self.residuals.size else 0.0

    @property
    def passed(self) -> bool:
        return self.min_residual >= -self.tol

    def table(self) -> pd.DataFrame:
        """Report table: k, phi_center, phi_width, residual, passed."""
        rows = []
        for i, k in enumerate(self.levels):
            for b, bump in enumerate(self.bumps):
                r = float(self.residuals[i, b])
                rows.append({"k": k, **bump.describe(), "residual": r, "passed": r >= -self.tol})
        return pd.DataFrame(rows, columns=["k", "phi_center", "phi_width", "residual", "passed"])

    def summary(self) -> dict:
        return {
            "run_id": self.run_id,
            "levels": len(self.levels),
            "bumps": len(self.bumps),
            "min_residual": self.min_residual,
            "tol": self.tol,
            "passed": self.passed,
            "flux_gap": self.flux_gap,
            "transfer_bound": self.transfer_bound,
            "cell_min": self.cell_min,
        }


def _transfer_bound(traj: Trajectory, bumps: Sequence[TestBump]) -> float:
    grid = traj.grid
    times = np.asarray(traj.times)
    gap = flux_gap_bound(traj.config.flux)
    worst = 0.0
    for bump in bumps:
        t_factor = bump.time_factor(times)
        t_mass = float(np.sum(0.5 * (t_factor[1:] + t_factor[:-1]) * np.diff(times)))
        dx_mass = float(np.sum(np.abs(bump.space_derivative(grid, grid.dim - 1)))) * grid.cell_volume
        worst = max(worst, t_mass * dx_mass)
    return 2.0 * gap * worst


def audit(
    traj: Trajectory,
    levels: Optional[Sequence[float]] = None,
    bumps: Optional[Sequence[TestBump]] = None,
    tol: Optional[float] = None,
    workers: int = 1,
    with_cell_check: bool = True,
) -> EntropyAudit:
    """
    Evaluate R(k, phi) over a family of levels and test bumps.

    Args:
        traj: Trajectory recorded at every step
        levels: Levels k (default: entropy_levels(traj))
        bumps: Test functions (default: default_bumps(traj))
        tol: Pass threshold (default 1e-6 times ||u_0||_1)
        workers: Levels evaluated concurrently
        with_cell_check: Also record the k = 0 cell entropy minimum

    Returns:
        EntropyAudit with the residual table

    Raises:
        ValueError: On a coarse stride, a bump leaving the window, or widths below 2 dx / 2 dt
    """
    _require_full_stride(traj)
    levels = list(entropy_levels(traj) if levels is None else levels)
    bumps = list(default_bumps(traj) if bumps is None else bumps)
    scale = lp_norm(traj.initial, 1) or abs(integrate(traj.initial)) or 1.0
    tol = DEFAULT_TOL * scale if tol is None else tol

    grid = traj.grid
    max_dt = float(np.max(np.diff(traj.times))) if len(traj.times) > 1 else 0.0
    for bump in bumps:
        if not bump.inside(grid, traj.times[0], traj.times[-1]):
            raise ValueError(f"test bump {bump.describe()} leaves the recorded space-time window")
        if any(w < 2.0 * h * (1 - 1e-12) for w, h in zip(bump.half_width, grid.spacing)):
            raise ValueError(f"test bump {bump.describe()} is narrower than two cells")
        if bump.t_half_width < 2.0 * max_dt * (1 - 1e-12):
            raise ValueError(f"test bump {bump.describe()} is shorter than two time steps (dt={max_dt:g})")

    values = _stack(traj)
    logger.info(f"[AUDIT] run_id={traj.run_id} | levels={len(levels)} | bumps={len(bumps)} | tol={tol:.3g}")
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        rows = list(executor.map(lambda k: _residuals_for_level(traj, k, bumps, values), levels))
    residuals = np.vstack(rows) if rows else np.empty((0, len(bumps)))

    result = EntropyAudit(
        run_id=traj.run_id,
        levels=levels,
        bumps=bumps,
        residuals=residuals,
        tol=tol,
        flux_gap=flux_gap_bound(traj.config.flux),
        transfer_bound=_transfer_bound(traj, bumps),
        cell_min=cell_entropy_check(traj, 0.0) if with_cell_check else None,
    )
    if result.passed:
        logger.info(f"[AUDIT] run_id={traj.run_id} | passed | min residual {result.min_residual:.3e}")
    else:
        logger.warning(f"[AUDIT] run_id={traj.run_id} | FAILED | min residual {result.min_residual:.3e} < -{tol:.3g}")
    return result
