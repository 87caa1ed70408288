"""
Decay-rate fits and profile-collapse measurement.
"""
import logging
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.stats import linregress

from ..grid import lp_norm
from ..stepper import RunConfig, Trajectory
from .exponents import Exponents
from .rescaling import profile_grid, rescale

logger = logging.getLogger(__name__)

MIN_SAMPLES = 8
MIN_DECADES = 1.0
# series columns holding the norms the fits need most
_NORM_COLUMNS = {1.0: "l1", 2.0: "l2", math.inf: "linf"}


def initial_time_scale(cfg: RunConfig) -> float:
    """Time over which the mollified datum is still felt: t0 for warm starts, h^2/2 otherwise."""
    if cfg.initial_field is not None:
        return 0.0
    if cfg.initial.kind == "heat_kernel":
        return cfg.initial.t0
    return 0.5 * cfg.initial.width ** 2


def default_window(traj: Trajectory) -> Tuple[float, float]:
    """Fit window [max(t_start, 10 t0), t_end] with t0 the initial time scale."""
    cfg = traj.config
    return max(cfg.t_start, 10.0 * initial_time_scale(cfg)), traj.t_final


def _thin_log_uniform(times: np.ndarray, count: int) -> np.ndarray:
    """Indices of at most count samples close to log-uniform positions."""
    if len(times) <= count:
        return np.arange(len(times))
    targets = np.geomspace(times[0], times[-1], count)
    idx = np.unique(np.clip(np.searchsorted(times, targets), 0, len(times) - 1))
    return idx


def norm_samples(traj: Trajectory, p: float, t_min: float, t_max: float) -> Tuple[np.ndarray, np.ndarray]:
    """(t, ||u(t)||_p) over [t_min, t_max], t > 0, from the series or the snapshots."""
    column = _NORM_COLUMNS.get(float(p))
    if column is not None:
        series = traj.column(column, t_min, t_max)
        t, norms = series.index.to_numpy(), series.to_numpy()
    else:
        pairs = traj.window(t_min, t_max)
        t = np.array([s for s, _ in pairs])
        norms = np.array([lp_norm(f, p) for _, f in pairs])
    keep = (t > 0) & (norms > 0)
    return t[keep], norms[keep]


def decay_fit(
    traj: Trajectory,
    p: float,
    t_min: Optional[float] = None,
    t_max: Optional[float] = None,
    max_samples: int = 64,
) -> Tuple[float, float]:
    """
    Least-squares slope of log ||u(t)||_p against log t.

    Args:
        traj: Trajectory
        p: Norm exponent (math.inf for the max norm)
        t_min, t_max: Fit window (default: default_window)
        max_samples: Samples are thinned to about this many log-uniform times

    Returns:
        Tuple of (slope, standard error)

    Raises:
        ValueError: With fewer than 8 samples or less than one decade in t
    """
    lo, hi = default_window(traj)
    t_min = lo if t_min is None else t_min
    t_max = hi if t_max is None else t_max
    t, norms = norm_samples(traj, p, t_min, t_max)
    if len(t) < MIN_SAMPLES or t[-1] / t[0] < 10.0 ** MIN_DECADES:
        span = f"[{t[0]:.3g}, {t[-1]:.3g}]" if len(t) else "[]"
        raise ValueError(
            f"insufficient dynamic range for a decay fit: {len(t)} samples over t in {span} "
            f"(need >= {MIN_SAMPLES} samples over one decade)"
        )
    idx = _thin_log_uniform(t, max_samples)
    fit = linregress(np.log(t[idx]), np.log(norms[idx]))
    return float(fit.slope), float(fit.stderr)


def decay_fit_row(
    traj: Trajectory,
    p: float,
    e: Exponents,
    rel_tol: float,
    t_min: Optional[float] = None,
    t_max: Optional[float] = None,
) -> Dict[str, Any]:
    """Fit report row: p, window, slope, stderr, theoretical slope, pass/fail."""
    lo, hi = default_window(traj)
    t_min = lo if t_min is None else t_min
    t_max = hi if t_max is None else t_max
    slope, stderr = decay_fit(traj, p, t_min, t_max)
    theory = e.decay_slope(p)
    rel_error = abs(slope - theory) / abs(theory) if theory else abs(slope)
    row = {
        "run_id": traj.run_id,
        "p": "inf" if p == math.inf else p,
        "t_min": t_min,
        "t_max": t_max,
        "slope": slope,
        "stderr": stderr,
        "theory": theory,
        "rel_error": rel_error,
        "tolerance": rel_tol,
        "passed": rel_error <= rel_tol,
    }
    logger.info(f"[FIT] run_id={traj.run_id} | p={row['p']} | slope={slope:.4f} | theory={theory:.4f}")
    return row


def collapse_distance(
    traj: Trajectory,
    e: Exponents,
    t1: float,
    t2: float,
    t_shift: float = 0.0,
    max_cells: int = 4096,
) -> float:
    """
    L1 distance between the rescaled profiles at t1 and t2 on a shared grid.

    Args:
        traj: Trajectory with snapshots at t1 and t2
        e: Exponents of the scaling
        t1, t2: Snapshot times, t1 < t2
        t_shift: Time offset added before rescaling (t0 for heat-kernel warm starts)
        max_cells: Cap on the shared grid's cells per axis

    Returns:
        ||profile(t1) - profile(t2)||_1
    """
    if not t1 < t2:
        raise ValueError(f"need t1 < t2, got {t1}, {t2}")
    f1, f2 = traj.field_at(t1), traj.field_at(t2)
    s1, s2 = t1 + t_shift, t2 + t_shift
    target = profile_grid([f1, f2], [s1, s2], e, max_cells=max_cells)
    p1 = rescale(f1, s1, e, target)
    p2 = rescale(f2, s2, e, target)
    return lp_norm(p1 - p2, 1)


def moment_exponent_fit(
    traj: Trajectory,
    t_min: Optional[float] = None,
    t_max: Optional[float] = None,
) -> Tuple[float, float]:
    """
    Growth exponent of the x_N width sqrt(second moment) against t.

    Returns:
        Tuple of (fitted exponent, standard error); above 1/2 means faster than diffusive spreading
    """
    lo, hi = default_window(traj)
    t_min = lo if t_min is None else t_min
    t_max = hi if t_max is None else t_max
    series = traj.column("second_moment_xN", t_min, t_max)
    t, m2 = series.index.to_numpy(), series.to_numpy()
    keep = (t > 0) & (m2 > 0)
    t, m2 = t[keep], m2[keep]
    if len(t) < MIN_SAMPLES:
        raise ValueError(f"moment fit needs >= {MIN_SAMPLES} samples, got {len(t)}")
    idx = _thin_log_uniform(t, 64)
    fit = linregress(np.log(t[idx]), 0.5 * np.log(m2[idx]))
    return float(fit.slope), float(fit.stderr)
