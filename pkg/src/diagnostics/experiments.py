"""
Multi-run experiments: sign preservation, mollifier independence,
large-time convergence of general data and the positive-part restart.

Every experiment returns an ExperimentResult so the runner can persist
the trajectories next to the tables and check records.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..grid import Field, Grid, integrate, lp_norm, negative_part_mass
from ..selfsim import exponents
from ..stepper import InitialRecipe, RunConfig, Trajectory, make_initial, run, run_lockstep
from .records import CheckRecord, at_most, is_strictly_decreasing, reported, worst_increase

logger = logging.getLogger(__name__)

ZERO_MASS_TOL = 1e-12


@dataclass
class ExperimentResult:
    """Tables, check records and the trajectories behind them."""
    table: pd.DataFrame
    records: List[CheckRecord] = field(default_factory=list)
    trajectories: Dict[str, Trajectory] = field(default_factory=dict)


def _bump(grid: Grid, center_n: float, radius: float) -> np.ndarray:
    coords = grid.mesh()
    r2 = sum(c ** 2 for c in coords[:-1]) + (coords[-1] - center_n) ** 2
    s = np.sqrt(r2) / radius
    out = np.zeros(grid.shape)
    inside = s < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def dipole_perturbation(grid: Grid, h: float, amplitude: float) -> Field:
    """
    Zero-mass dipole supported in |x| <= h.

    A positive bump of radius h/2 at x_N = +h/2 with peak `amplitude`, and a
    negative bump at x_N = -h/2 scaled so the discrete total mass is zero.
    """
    plus = _bump(grid, 0.5 * h, 0.5 * h)
    minus = _bump(grid, -0.5 * h, 0.5 * h)
    if plus.max() == 0 or minus.sum() == 0:
        raise ValueError(f"dipole of width {h} is not resolved on spacing {grid.spacing}")
    plus *= amplitude / plus.max()
    minus *= plus.sum() / minus.sum()
    return Field(grid, plus - minus)


def slab_initial(f: Field, r: float) -> Field:
    """
    Fold the mass outside |x_N| < r back into the slab, line by line.

    u_bar = (u - phi_r / L) 1_{|x_N| < r} with phi_r(x') = -int_{|x_N| >= r} u dx_N
    and L the discrete slab length, so the x' marginal is kept exactly.
    """
    grid = f.grid
    x_n = grid.axis_centers(grid.dim - 1)
    slab = np.abs(x_n) < r
    count = int(slab.sum())
    if count == 0:
        raise ValueError(f"slab |x_N| < {r} contains no cells (dx_N = {grid.dx_n})")
    outside_mass = np.sum(f.values[..., ~slab], axis=-1) * grid.dx_n
    values = np.where(slab, f.values + (outside_mass / (count * grid.dx_n))[..., None], 0.0)
    return Field(grid, values)


def shifted_along_xN(f: Field, cells: int) -> Field:
    """u(x', x_N - cells dx_N) with zeros shifted in."""
    values = np.zeros_like(f.values)
    if cells == 0:
        values[...] = f.values
    elif cells > 0:
        values[..., cells:] = f.values[..., :-cells]
    else:
        values[..., :cells] = f.values[..., -cells:]
    return Field(f.grid, values)


def _run_all(configs: Sequence[RunConfig], workers: int) -> Dict[str, Trajectory]:
    """Independent runs keyed by run_id."""
    results: Dict[str, Trajectory] = {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = {executor.submit(run, cfg): cfg.run_id for cfg in configs}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


def _with_time(cfg: RunConfig, t: float) -> RunConfig:
    times = tuple(sorted(set(cfg.snapshot_times) | {t}))
    return cfg.with_changes(snapshot_times=times)


def sign_configs(base: RunConfig, amplitude_factor: float, widths: Sequence[float]) -> List[RunConfig]:
    """
    One run per h_k: a gaussian of std h_k/4 and mass M plus a dipole of width h_k
    and peak amplitude_factor * max(gaussian).

    Raises:
        ValueError: If the widths do not shrink or a dipole carries mass
    """
    if not is_strictly_decreasing(widths):
        raise ValueError(f"widths must be strictly decreasing, got {list(widths)}")
    configs = []
    for k, h in enumerate(widths):
        recipe = InitialRecipe(kind="gaussian", width=0.25 * h)
        mollifier = make_initial(recipe, base.mass, base.grid)
        dipole = dipole_perturbation(base.grid, h, amplitude_factor * mollifier.max)
        dipole_mass = integrate(dipole)
        if abs(dipole_mass) > ZERO_MASS_TOL * max(lp_norm(dipole, 1), 1e-300):
            raise ValueError(f"perturbation of width {h} carries mass {dipole_mass:.3e}")
        configs.append(base.with_changes(initial=recipe, initial_field=mollifier + dipole, run_id=f"sign-k{k}"))
    return configs


def sign_evaluate(trajectories: Dict[str, Trajectory], widths: Sequence[float]) -> ExperimentResult:
    """Table of negative-part masses (k, width, time, negative_mass) and the sign checks."""
    runs = [trajectories[f"sign-k{k}"] for k in range(len(widths))]
    rows = []
    for k, (h, traj) in enumerate(zip(widths, runs)):
        for t, f in zip(traj.times, traj.fields):
            rows.append({"k": k, "width": h, "time": t, "negative_mass": negative_part_mass(f)})
    table = pd.DataFrame(rows, columns=["k", "width", "time", "negative_mass"])

    records = []
    scale = max(lp_norm(traj.initial, 1) for traj in runs)
    for k, traj in enumerate(runs):
        series = table.loc[table["k"] == k, "negative_mass"].to_numpy()
        records.append(at_most(
            f"sign_time_monotone[k={k}]",
            worst_increase(series),
            2.0 * max(traj.steps, 1) * traj.config.lin_tol * scale,
            "2 * steps * lin_tol * mass scale",
        ))
    finals = table.groupby("k")["negative_mass"].last().to_numpy()
    initials = table.groupby("k")["negative_mass"].first().to_numpy()
    records.append(CheckRecord(
        "sign_width_decreasing",
        float(finals[-1]),
        math.nan,
        is_strictly_decreasing(finals),
        "||u^-(T)||_1 strictly decreasing in the width index",
        details={"finals": finals.tolist()},
    ))
    records.append(at_most(
        "sign_final_fraction",
        float(finals[-1]),
        0.1 * float(initials[-1]),
        "10% of ||u^-(0)||_1 of the narrowest run",
    ))
    return ExperimentResult(table, records, {traj.run_id: traj for traj in runs})


def sign_experiment(
    base: RunConfig,
    amplitude_factor: float,
    widths: Sequence[float],
    workers: int = 1,
) -> ExperimentResult:
    """
    Negative-part masses of mollified data plus zero-mass dipoles of shrinking width.

    Args:
        base: Shared configuration (grid, operator, flux, schedule)
        amplitude_factor: Dipole amplitude relative to max of the mollifier
        widths: h_k, strictly decreasing
        workers: Concurrent runs
    """
    configs = sign_configs(base, amplitude_factor, widths)
    return sign_evaluate(_run_all(configs, workers), widths)


def uniqueness_configs(
    base: RunConfig,
    recipe_a: InitialRecipe,
    recipe_b: InitialRecipe,
    widths: Sequence[float],
    t_star: float,
) -> List[Tuple[RunConfig, RunConfig]]:
    """One lockstep pair per width; both recipes carry the base mass."""
    if not is_strictly_decreasing(widths):
        raise ValueError(f"widths must be strictly decreasing, got {list(widths)}")
    cfg = _with_time(base, t_star)
    return [
        (
            cfg.with_changes(initial=replace(recipe_a, width=h), initial_field=None, run_id=f"unique-a-h{h:g}"),
            cfg.with_changes(initial=replace(recipe_b, width=h), initial_field=None, run_id=f"unique-b-h{h:g}"),
        )
        for h in widths
    ]


def uniqueness_evaluate(
    trajectories: Dict[str, Trajectory],
    widths: Sequence[float],
    t_star: float,
    error_floor: Optional[float] = None,
) -> ExperimentResult:
    """Table (width, initial_distance, distance, steps) and the uniqueness checks."""
    rows, runs = [], {}
    for h in widths:
        a, b = trajectories[f"unique-a-h{h:g}"], trajectories[f"unique-b-h{h:g}"]
        runs[a.run_id], runs[b.run_id] = a, b
        rows.append({
            "width": h,
            "initial_distance": lp_norm(a.initial - b.initial, 1),
            "distance": lp_norm(a.field_at(t_star) - b.field_at(t_star), 1),
            "steps": max(a.steps, b.steps),
            "scale": max(lp_norm(a.initial, 1), lp_norm(b.initial, 1)),
            "lin_tol": a.config.lin_tol,
        })
    table = pd.DataFrame(rows, columns=["width", "initial_distance", "distance", "steps"])

    distances = table["distance"].to_numpy()
    records = [CheckRecord(
        "uniqueness_decreasing",
        float(distances[-1]),
        math.nan,
        is_strictly_decreasing(distances),
        "distance at t* strictly decreasing as the width shrinks",
        details={"distances": distances.tolist()},
    )]
    for row in rows:
        records.append(at_most(
            f"uniqueness_contraction[h={row['width']:g}]",
            row["distance"],
            row["initial_distance"] + 2.0 * max(row["steps"], 1) * row["lin_tol"] * row["scale"],
            "initial L1 distance + 2 * steps * lin_tol * mass scale",
        ))
    if error_floor is not None:
        records.append(at_most("uniqueness_floor", float(distances[-1]), 2.0 * error_floor,
                               "2 x measured grid-error floor", floor=error_floor))
    return ExperimentResult(table, records, runs)


def uniqueness_experiment(
    base: RunConfig,
    recipe_a: InitialRecipe,
    recipe_b: InitialRecipe,
    widths: Sequence[float],
    t_star: float,
    workers: int = 1,
    error_floor: Optional[float] = None,
) -> ExperimentResult:
    """
    L1 distance at t_star between runs started from two mollifier shapes of equal mass.

    Each pair runs in lockstep so both share one discrete evolution operator.
    """
    pairs = uniqueness_configs(base, recipe_a, recipe_b, widths, t_star)
    trajectories: Dict[str, Trajectory] = {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(run_lockstep, list(pair)) for pair in pairs]
        for future in as_completed(futures):
            for traj in future.result():
                trajectories[traj.run_id] = traj
    return uniqueness_evaluate(trajectories, widths, t_star, error_floor)


def large_time_configs(
    base: RunConfig,
    general_recipe: InitialRecipe,
    times: Sequence[float],
    narrow_width: float,
) -> Tuple[RunConfig, RunConfig]:
    """The general-datum run and the narrow-mollifier run, same mass, sharing one schedule."""
    cfg = base
    for t in times:
        cfg = _with_time(cfg, t)
    return (
        cfg.with_changes(initial=general_recipe, initial_field=None, run_id="large-time-general"),
        cfg.with_changes(initial=InitialRecipe(kind="gaussian", width=narrow_width), initial_field=None,
                         run_id="large-time-narrow"),
    )


def large_time_evaluate(
    trajectories: Dict[str, Trajectory],
    times: Sequence[float],
    ps: Sequence[float],
) -> ExperimentResult:
    """Rows (time, p, distance, scaled) with scaled = t^{alpha (1 - 1/p)} ||u(t) - U(t)||_p."""
    general, narrow = trajectories["large-time-general"], trajectories["large-time-narrow"]
    e = exponents(general.grid.dim, general.config.flux.q)
    rows = []
    for t in times:
        diff = general.field_at(t) - narrow.field_at(t)
        for p in ps:
            distance = lp_norm(diff, p)
            rows.append({"time": t, "p": "inf" if p == math.inf else p, "distance": distance,
                         "scaled": t ** (-e.decay_slope(p)) * distance})
    table = pd.DataFrame(rows, columns=["time", "p", "distance", "scaled"])

    records = []
    for p, group in table.groupby("p", sort=False):
        scaled = group.sort_values("time")["scaled"].to_numpy()
        records.append(CheckRecord(
            f"large_time_decreasing[p={p}]",
            float(scaled[-1]),
            math.nan,
            is_strictly_decreasing(scaled),
            "scaled distance decreasing over the recorded times",
            details={"scaled": scaled.tolist()},
        ))
    return ExperimentResult(table, records, {general.run_id: general, narrow.run_id: narrow})


def large_time_convergence(
    base: RunConfig,
    general_recipe: InitialRecipe,
    times: Sequence[float],
    ps: Sequence[float],
    narrow_width: float,
) -> ExperimentResult:
    """
    t^{alpha (1 - 1/p)} ||u(t) - U(t)||_p for a general datum u_0 against a narrow mollifier U_0 of the same mass.

    Both runs advance in lockstep.
    """
    configs = large_time_configs(base, general_recipe, times, narrow_width)
    trajectories = {traj.run_id: traj for traj in run_lockstep(list(configs))}
    return large_time_evaluate(trajectories, times, ps)


def positive_part_restart(traj: Trajectory, t_j: float, horizon: Optional[float] = None) -> ExperimentResult:
    """
    Re-run from u^+(t_j) and measure max over time and cells of (u^+(t_j + s) - h(s))^+.

    The result is reported only; no tolerance is asserted.
    """
    start = traj.field_at(t_j)
    t_end = traj.t_final if horizon is None else min(traj.t_final, t_j + horizon)
    later = [t for t in traj.times if t_j < t <= t_end]
    if not later:
        raise ValueError(f"no snapshots of {traj.run_id} after t_j={t_j}")
    cfg = traj.config.with_changes(
        t_start=t_j,
        t_end=later[-1],
        snapshot_times=tuple(later),
        initial_field=start.positive_part(),
        record_steps=False,
        run_id=f"{traj.run_id}-restart",
    )
    restarted = run(cfg)

    rows = []
    for t in later:
        excess = traj.field_at(t).positive_part() - restarted.field_at(t)
        rows.append({"time": t, "excess": max(0.0, excess.max)})
    table = pd.DataFrame(rows, columns=["time", "excess"])
    worst = float(table["excess"].max())
    logger.info(f"[RESTART] run_id={traj.run_id} | t_j={t_j:g} | worst excess={worst:.3e}")
    record = reported(f"positive_part_restart[{traj.run_id}, t_j={t_j:g}]", worst,
                      "max (u^+(t) - h(t))^+ after restarting from u^+(t_j); no tolerance available")
    return ExperimentResult(table, [record], {restarted.run_id: restarted})
