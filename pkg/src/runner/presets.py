"""
Experiment presets.

A preset is split in two halves so stored runs can be re-evaluated:

    plan(spec)                  -> groups of RunConfigs (each group runs in lockstep)
    evaluate(spec, runs, ...)   -> tables and check records

plan() builds and validates every config before anything runs.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..diagnostics import (
    CheckRecord,
    RunPair,
    at_least,
    at_most,
    comparison_record,
    constant_stability,
    contraction_check,
    contraction_series,
    energy_constant,
    energy_inequality,
    energy_report_rows,
    energy_series,
    is_strictly_decreasing,
    large_time_configs,
    large_time_evaluate,
    marginal_error,
    mass_difference_check,
    positive_part_restart,
    primitive_sandwich,
    reported,
    shift_check,
    shift_table,
    shifted_along_xN,
    sign_configs,
    sign_evaluate,
    slab_initial,
    tail_report,
    uniqueness_configs,
    uniqueness_evaluate,
)
from ..entropy import audit, default_bumps, entropy_levels, time_reversed
from ..grid import Field, Grid, lp_norm
from ..selfsim import (
    collapse_distance,
    decay_fit_row,
    exponents,
    heat_kernel,
    initial_time_scale,
    moment_exponent_fit,
)
from ..stepper import InitialRecipe, OperatorChoice, RunConfig, Trajectory, make_initial
from .config import ExperimentSpec

logger = logging.getLogger(__name__)

MASS_TOL = 1e-8
CELL_ENTROPY_TOL = 1e-8
UNIQUENESS_FLOOR_RUN = "unique-floor"

Groups = List[List[RunConfig]]
Runs = Dict[str, Trajectory]


@dataclass
class PresetOutcome:
    """Tables and records of one preset evaluation, plus runs produced while evaluating."""
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    records: List[CheckRecord] = field(default_factory=list)
    extra_runs: Runs = field(default_factory=dict)


@dataclass(frozen=True)
class Preset:
    name: str
    plan: Callable[[ExperimentSpec], Groups]
    evaluate: Callable[[ExperimentSpec, Runs, int], PresetOutcome]
    description: str = ""


def _mass(spec: ExperimentSpec) -> float:
    return max(abs(spec.base.mass), 1e-300)


def _with_times(cfg: RunConfig, times: Sequence[float]) -> RunConfig:
    merged = sorted(set(cfg.snapshot_times) | {float(t) for t in times})
    return cfg.with_changes(snapshot_times=tuple(merged))


def _even_times(cfg: RunConfig, count: int = 10) -> List[float]:
    return list(np.linspace(cfg.t_start, cfg.t_end, count + 1)[1:])


def run_records(traj: Trajectory) -> List[CheckRecord]:
    """Checks every run carries: mass conservation and the online cell entropy summary."""
    records = [at_most(
        f"mass_conservation[{traj.run_id}]",
        traj.mass_drift(),
        MASS_TOL,
        "relative drift 1e-8 (zero-flux faces, Neumann closure)",
        steps=traj.steps,
    )]
    entropy = traj.series["entropy_min"].to_numpy(dtype=float) if len(traj.series) else np.array([])
    entropy = entropy[np.isfinite(entropy)]
    if entropy.size:
        scale = max(lp_norm(traj.initial, 1), 1e-300)
        records.append(at_least(
            f"cell_entropy[{traj.run_id}]",
            float(entropy.min()),
            -CELL_ENTROPY_TOL * scale,
            "-1e-8 * ||u_0||_1",
        ))
    return records


# heat_baseline

def plan_heat_baseline(spec: ExperimentSpec) -> Groups:
    base = spec.base
    spacings = spec.params["spacings"]
    if len(spacings) < 2 or not is_strictly_decreasing(spacings):
        raise ValueError(f"params.spacings must list at least two decreasing spacings, got {spacings}")
    if base.initial.kind != "heat_kernel":
        raise ValueError("heat_baseline needs initial.kind = heat_kernel")
    half = [0.5 * (hi - lo) for lo, hi in zip(base.grid.low, base.grid.high)]
    groups = []
    for s in spacings:
        grid = Grid.symmetric(half, [s] * base.grid.dim)
        groups.append([base.with_changes(
            grid=grid,
            operator=OperatorChoice("full"),
            flux=replace(base.flux, enabled=False, eta=None),
            dt_max=base.dt_max * s / spacings[0],
            run_id=f"heat-dx{s:g}",
        )])
    return groups


def heat_error(traj: Trajectory) -> float:
    """||u(T) - M Gamma(T - t_start + t0)||_1 against the closed-form kernel."""
    cfg = traj.config
    t = traj.t_final - cfg.t_start + cfg.initial.t0
    exact = cfg.mass * heat_kernel(t, traj.grid.mesh(), traj.grid.dim)
    return lp_norm(traj.final - Field(traj.grid, np.broadcast_to(exact, traj.grid.shape)), 1)


def evaluate_heat_baseline(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    rows = []
    for s in spec.params["spacings"]:
        traj = runs[f"heat-dx{s:g}"]
        rows.append({"spacing": s, "l1_error": heat_error(traj), "steps": traj.steps})
    table = pd.DataFrame(rows, columns=["spacing", "l1_error", "steps"])
    table["reduction"] = table["l1_error"].shift(1) / table["l1_error"]

    rate, rate_tol = spec.params["rate"], spec.params["rate_tol"]
    records = []
    for _, row in table.iloc[1:].iterrows():
        records.append(at_most(
            f"heat_convergence[dx={row['spacing']:g}]",
            abs(row["reduction"] / rate - 1.0),
            rate_tol,
            f"error reduction {rate:g} per halving within {rate_tol:.0%}",
            reduction=float(row["reduction"]),
        ))
    records.append(reported("heat_error_floor", float(table["l1_error"].iloc[-1]),
                            "L1 error at the finest spacing"))
    return PresetOutcome({"heat_errors": table}, records)


# decay_fit

def _decay_window(spec: ExperimentSpec) -> List[float]:
    lo = spec.params["t_min"]
    if lo is None:
        lo = max(spec.base.t_start, 10.0 * initial_time_scale(spec.base))
    hi = spec.params["t_max"] if spec.params["t_max"] is not None else spec.base.t_end
    return [lo, hi]


def plan_decay_fit(spec: ExperimentSpec) -> Groups:
    base = spec.base
    lo, hi = _decay_window(spec)
    if not 0 < lo < hi <= base.t_end:
        raise ValueError(f"fit window [{lo}, {hi}] must satisfy 0 < t_min < t_max <= t_end={base.t_end}")
    cfg = _with_times(base, np.geomspace(lo, hi, 32)).with_changes(run_id=f"{base.run_id}-{base.operator.kind}")
    groups = [[cfg]]
    if spec.params["compare_full"] and base.operator.kind != "full":
        groups.append([cfg.with_changes(operator=OperatorChoice("full"), run_id=f"{base.run_id}-full")])
    return groups


def evaluate_decay_fit(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    base = spec.base
    lo, hi = _decay_window(spec)
    e = exponents(base.grid.dim, base.flux.q)
    rel_tol = spec.params["rel_tol"]
    rows, records = [], []
    for traj in runs.values():
        for p in spec.params["norms"]:
            row = decay_fit_row(traj, p, e, rel_tol, lo, hi)
            rows.append(row)
            records.append(at_most(
                f"decay_slope[{traj.run_id}, p={row['p']}]",
                row["rel_error"],
                rel_tol,
                f"theoretical slope {row['theory']:.4f} within {rel_tol:.0%}",
                slope=row["slope"],
                stderr=row["stderr"],
            ))
        exponent, stderr = moment_exponent_fit(traj, lo, hi)
        records.append(reported(f"xN_width_exponent[{traj.run_id}]", exponent,
                                "growth exponent of the x_N width, above 1/2 for fast convection",
                                stderr=stderr))
    table = pd.DataFrame(rows)

    if len(runs) == 2:
        first, second = list(runs)
        for p in spec.params["norms"]:
            label = "inf" if p == math.inf else p
            a = table[(table["run_id"] == first) & (table["p"] == label)]["slope"].iloc[0]
            b = table[(table["run_id"] == second) & (table["p"] == label)]["slope"].iloc[0]
            records.append(at_most(
                f"decay_slope_operator_independent[p={label}]",
                abs(b - a) / abs(a),
                rel_tol,
                f"slopes of {first} and {second} agree within {rel_tol:.0%}",
            ))
    return PresetOutcome({"decay_fit": table}, records)


# selfsim_collapse

def plan_selfsim_collapse(spec: ExperimentSpec) -> Groups:
    base = spec.base
    times = spec.params["times"]
    if not times or any(t <= base.t_start for t in times):
        raise ValueError(f"params.times must be after t_start, got {times}")
    if 4.0 * max(times) > base.t_end:
        raise ValueError(f"collapse pairs (t, 4t) need t_end >= {4.0 * max(times):g}, got {base.t_end:g}")
    exponents(base.grid.dim, base.flux.q)
    return [[_with_times(base, list(times) + [4.0 * t for t in times])]]


def evaluate_selfsim_collapse(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    (traj,) = runs.values()
    e = exponents(traj.grid.dim, traj.config.flux.q)
    t_shift = traj.config.initial.t0 if traj.config.initial.kind == "heat_kernel" else 0.0
    rows = []
    for t in spec.params["times"]:
        distance = collapse_distance(traj, e, t, 4.0 * t, t_shift=t_shift, max_cells=spec.params["max_cells"])
        rows.append({"t": t, "t4": 4.0 * t, "distance": distance})
    table = pd.DataFrame(rows, columns=["t", "t4", "distance"])
    distances = table["distance"].to_numpy()

    records = [CheckRecord(
        "collapse_decreasing",
        float(distances[-1]),
        math.nan,
        is_strictly_decreasing(distances),
        "collapse distance decreasing in t",
        details={"distances": distances.tolist()},
    )]
    if len(distances) > 1:
        records.append(at_most("collapse_final_ratio", float(distances[-1] / distances[0]),
                               spec.params["final_ratio"], "last / first collapse distance"))

    marginal = marginal_error(traj)
    worst = float(marginal["marginal_error"].max()) if len(marginal) else 0.0
    records.append(at_most("marginal_identity", worst, spec.params["marginal_tol"] * _mass(spec),
                           "x' marginal against M Gamma_{N-1}(t + t0)"))
    return PresetOutcome({"collapse": table, "marginal": marginal}, records)


# uniqueness

def _uniqueness_pairs(spec: ExperimentSpec):
    widths = spec.params["widths"]
    recipe_a = InitialRecipe(kind=spec.params["recipe_a"], width=widths[0])
    recipe_b = InitialRecipe(kind=spec.params["recipe_b"], width=widths[0])
    return uniqueness_configs(spec.base, recipe_a, recipe_b, widths, spec.params["t_star"])


def plan_uniqueness(spec: ExperimentSpec) -> Groups:
    t_star = spec.params["t_star"]
    if not spec.base.t_start < t_star <= spec.base.t_end:
        raise ValueError(f"params.t_star={t_star} outside (t_start, t_end]")
    pairs = _uniqueness_pairs(spec)
    for a, b in pairs:
        make_initial(a.initial, a.mass, a.grid)
        make_initial(b.initial, b.mass, b.grid)
    groups = [list(pair) for pair in pairs]
    floor = _uniqueness_floor_config(spec)
    if floor is not None:
        make_initial(floor.initial, floor.mass, floor.grid)
        groups.append([floor])
    return groups


def _uniqueness_floor_config(spec: ExperimentSpec) -> Optional[RunConfig]:
    """Heat run on the same box whose L1 error against the kernel is the grid-error floor."""
    s = spec.params["floor_spacing"]
    if s is None:
        return None
    base = spec.base
    half = [0.5 * (hi - lo) for lo, hi in zip(base.grid.low, base.grid.high)]
    return base.with_changes(
        grid=Grid.symmetric(half, [s] * base.grid.dim),
        operator=OperatorChoice("full"),
        flux=replace(base.flux, enabled=False, eta=None),
        initial=InitialRecipe(kind="heat_kernel", t0=spec.params["floor_t0"]),
        initial_field=None,
        theta=0.5,
        t_end=spec.params["t_star"],
        snapshot_times=tuple(t for t in base.snapshot_times if t <= spec.params["t_star"]),
        dt_max=spec.params["floor_dt_max"],
        run_id=UNIQUENESS_FLOOR_RUN,
    )


def evaluate_uniqueness(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    floor = spec.params["error_floor"]
    if floor is None and UNIQUENESS_FLOOR_RUN in runs:
        floor = heat_error(runs[UNIQUENESS_FLOOR_RUN])
        logger.info(f"[UNIQUENESS] measured floor={floor:.3e} | dx={runs[UNIQUENESS_FLOOR_RUN].grid.spacing[-1]:g}")
    result = uniqueness_evaluate(runs, spec.params["widths"], spec.params["t_star"], floor)
    tables = {"uniqueness": result.table}
    if floor is not None:
        tables["uniqueness_floor"] = pd.DataFrame([{"floor": floor, "bound": 2.0 * floor}])
    return PresetOutcome(tables, result.records)


# sign_preservation

def plan_sign_preservation(spec: ExperimentSpec) -> Groups:
    restart = spec.params["restart_time"]
    if restart is not None and not spec.base.t_start < restart < spec.base.t_end:
        raise ValueError(f"params.restart_time={restart} outside (t_start, t_end)")
    base = spec.base if restart is None else _with_times(spec.base, [restart])
    return [[cfg] for cfg in sign_configs(base, spec.params["amplitude"], spec.params["widths"])]


def evaluate_sign_preservation(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    widths = spec.params["widths"]
    result = sign_evaluate(runs, widths)
    outcome = PresetOutcome({"sign": result.table}, result.records)
    restart = spec.params["restart_time"]
    if restart is not None:
        finest = runs[f"sign-k{len(widths) - 1}"]
        restarted = positive_part_restart(finest, restart)
        outcome.tables["positive_part_restart"] = restarted.table
        outcome.records.extend(restarted.records)
        outcome.extra_runs.update(restarted.trajectories)
    return outcome


# contraction / comparison

def random_bump(grid: Grid, rng: np.random.Generator, width: float, amplitude: float) -> Field:
    """Gaussian bump with random center in |x_i| <= 2 width, std in [width, 2 width]."""
    coords = grid.mesh()
    center = rng.uniform(-2.0 * width, 2.0 * width, size=grid.dim)
    std = rng.uniform(width, 2.0 * width)
    r2 = sum((c - x0) ** 2 for c, x0 in zip(coords, center))
    return Field(grid, amplitude * np.exp(-0.5 * r2 / std ** 2))


def _random_pairs(spec: ExperimentSpec, ordered: bool) -> Groups:
    base = spec.base
    if spec.params["pairs"] < 1:
        raise ValueError(f"params.pairs must be >= 1, got {spec.params['pairs']}")
    rng = np.random.default_rng(spec.params["seed"])
    u0 = make_initial(base.initial, base.mass, base.grid)
    width = max(base.initial.effective_width, 2.0 * max(base.grid.spacing))
    scale = spec.params["perturbation"] * u0.max_abs
    groups = []
    for i in range(spec.params["pairs"]):
        if ordered:
            first = u0 + random_bump(base.grid, rng, width, rng.uniform(-scale, scale))
            second = first + random_bump(base.grid, rng, width, rng.uniform(0.0, scale))
        else:
            first = u0 + random_bump(base.grid, rng, width, rng.uniform(-scale, scale))
            second = u0 + random_bump(base.grid, rng, width, rng.uniform(-scale, scale))
        groups.append([
            base.with_changes(initial_field=first, run_id=f"pair{i:02d}-a"),
            base.with_changes(initial_field=second, run_id=f"pair{i:02d}-b"),
        ])
    return groups


def _pairs_from(runs: Runs) -> List[RunPair]:
    names = sorted(name[:-2] for name in runs if name.endswith("-a"))
    return [RunPair(runs[f"{name}-a"], runs[f"{name}-b"]) for name in names]


def plan_contraction(spec: ExperimentSpec) -> Groups:
    return _random_pairs(spec, ordered=False)


def evaluate_contraction(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    rows, records = [], []
    for pair in _pairs_from(runs):
        series = contraction_series(pair)
        record = contraction_check(pair)
        records.extend([record, mass_difference_check(pair)])
        rows.append({"pair": pair.label(), "start": float(series.iloc[0]), "end": float(series.iloc[-1]),
                     "worst_increase": record.measured, "tolerance": record.tolerance})
    return PresetOutcome({"contraction": pd.DataFrame(rows)}, records)


def plan_comparison(spec: ExperimentSpec) -> Groups:
    return _random_pairs(spec, ordered=True)


def evaluate_comparison(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    rows, records = [], []
    for pair in _pairs_from(runs):
        record = comparison_record(pair)
        records.append(record)
        rows.append({"pair": pair.label(), "violation": record.measured, "tolerance": record.tolerance})
    return PresetOutcome({"comparison": pd.DataFrame(rows)}, records)


# entropy_audit

def plan_entropy_audit(spec: ExperimentSpec) -> Groups:
    if spec.params["levels"] < 1 or spec.params["bumps"] < 1:
        raise ValueError("params.levels and params.bumps must be positive")
    return [[spec.base.with_changes(record_steps=True)]]


def evaluate_entropy_audit(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    (traj,) = runs.values()
    tol = spec.params["tol_factor"] * _mass(spec)
    levels = entropy_levels(traj, spec.params["levels"])
    result = audit(traj, levels=levels, bumps=default_bumps(traj, spec.params["bumps"]), tol=tol, workers=workers)
    records = [
        at_least(f"kruzhkov_residual[{traj.run_id}]", result.min_residual, -tol,
                 f"-{spec.params['tol_factor']:g} * M over {len(result.levels)} levels x {len(result.bumps)} bumps"),
        at_least(f"cell_entropy_audit[{traj.run_id}]", result.cell_min, -spec.params["cell_tol_factor"] * _mass(spec),
                 f"-{spec.params['cell_tol_factor']:g} * M"),
        reported(f"flux_gap[{traj.run_id}]", result.flux_gap, "sup |f - f_eta| = eta^{q/2}",
                 transfer_bound=result.transfer_bound),
    ]
    table = result.table().assign(run=traj.run_id)
    if spec.params["reversed"]:
        backwards = time_reversed(traj)
        reverse = audit(backwards, levels=levels, bumps=default_bumps(backwards, spec.params["bumps"]),
                        tol=tol, workers=workers, with_cell_check=False)
        records.append(CheckRecord(
            f"reversed_run_fails[{traj.run_id}]",
            reverse.min_residual,
            -tol,
            not reverse.passed,
            "time-reversed run must violate the entropy inequalities",
        ))
        table = pd.concat([table, reverse.table().assign(run=backwards.run_id)], ignore_index=True)
    return PresetOutcome({"entropy_audit": table}, records)


# tail_report

def plan_tail_report(spec: ExperimentSpec) -> Groups:
    base = spec.base
    if any(r <= 0 for r in spec.params["radii"]):
        raise ValueError(f"params.radii must be positive, got {spec.params['radii']}")
    cfg = base if base.snapshot_times else _with_times(base, _even_times(base))
    cfg = cfg.with_changes(run_id="tail-base")
    groups = [[cfg]]
    if spec.params["refine"]:
        groups.append([cfg.with_changes(grid=base.grid.refined(2), flux=replace(base.flux, eta=None),
                                        run_id="tail-refined")])
    if spec.params["enlarge"] > 1.0:
        half = [0.5 * (hi - lo) * spec.params["enlarge"] for lo, hi in zip(base.grid.low, base.grid.high)]
        groups.append([cfg.with_changes(grid=Grid.symmetric(half, base.grid.spacing), run_id="tail-enlarged")])
    return groups


def evaluate_tail_report(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    tables, constants = [], {}
    for name in ("tail-base", "tail-refined", "tail-enlarged"):
        if name in runs:
            table, c = tail_report(runs[name], spec.params["radii"])
            tables.append(table.assign(run=name))
            constants[name] = c
    reference = constants["tail-base"]
    records = [at_most("tail_constant", reference, spec.params["bound_factor"],
                       "fitted constant of the tail bound")]
    others = [c for name, c in constants.items() if name != "tail-base"]
    if others:
        records.append(constant_stability("tail_constant_stability", reference, others, spec.params["stability"]))
    return PresetOutcome({"tail": pd.concat(tables, ignore_index=True)}, records)


# sandwich

def plan_sandwich(spec: ExperimentSpec) -> Groups:
    base = spec.base
    r = spec.params["r"]
    if not r > 0:
        raise ValueError(f"params.r must be positive, got {r}")
    g = make_initial(base.initial, base.mass, base.grid)
    first = slab_initial(g, r)
    second = slab_initial(shifted_along_xN(g, spec.params["shift_cells"]), r)
    return [[
        base.with_changes(initial_field=first, run_id="sandwich-u"),
        base.with_changes(initial_field=second, run_id="sandwich-ubar"),
    ]]


def evaluate_sandwich(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    pair = RunPair(runs["sandwich-u"], runs["sandwich-ubar"])
    violation = primitive_sandwich(pair, spec.params["r"])
    records = [
        at_most("primitive_sandwich", violation, spec.params["tol_factor"] * _mass(spec),
                f"{spec.params['tol_factor']:g} * M"),
        mass_difference_check(pair),
    ]
    table = pd.DataFrame([{"r": spec.params["r"], "violation": violation, "steps": pair.steps}])
    return PresetOutcome({"sandwich": table}, records)


# energy_report

def _shift_time(spec: ExperimentSpec) -> float:
    t = spec.params["shift_time"]
    return spec.base.t_end if t is None else t


def plan_energy_report(spec: ExperimentSpec) -> Groups:
    base = spec.base
    for tau in spec.params["taus"]:
        if not base.t_start <= tau < base.t_end:
            raise ValueError(f"tau={tau} outside [t_start, t_end)")
    if not base.t_start < _shift_time(spec) <= base.t_end:
        raise ValueError(f"params.shift_time={_shift_time(spec)} outside (t_start, t_end]")
    times = [t for t in spec.params["taus"] if t > base.t_start] + [_shift_time(spec)]
    return [[_with_times(base, times).with_changes(series_stride=1)]]


def evaluate_energy_report(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    (traj,) = runs.values()
    records = [energy_inequality(traj, tau, spec.params["slack"]) for tau in spec.params["taus"]]
    records.extend(energy_report_rows(traj))
    shifts = shift_table(traj, _shift_time(spec), spec.params["shifts"])
    records.append(shift_check(shifts, f"shift_monotone[{traj.run_id}]"))
    tables = {
        "energy_series": energy_series(traj),
        "energy_constant": energy_constant(traj, spec.params["taus"]),
        "shift": shifts,
    }
    return PresetOutcome(tables, records)


# large_time

def _general_recipe(spec: ExperimentSpec) -> InitialRecipe:
    return InitialRecipe(kind=spec.params["general_kind"], width=spec.params["general_width"],
                         offset=spec.params["general_offset"])


def plan_large_time(spec: ExperimentSpec) -> Groups:
    times = spec.params["times"]
    if len(times) < 2 or any(not spec.base.t_start < t <= spec.base.t_end for t in times):
        raise ValueError(f"params.times needs at least two times in (t_start, t_end], got {times}")
    general, narrow = large_time_configs(spec.base, _general_recipe(spec), times, spec.params["narrow_width"])
    make_initial(general.initial, general.mass, general.grid)
    make_initial(narrow.initial, narrow.mass, narrow.grid)
    return [[general, narrow]]


def evaluate_large_time(spec: ExperimentSpec, runs: Runs, workers: int) -> PresetOutcome:
    result = large_time_evaluate(runs, spec.params["times"], spec.params["norms"])
    return PresetOutcome({"large_time": result.table}, result.records)


PRESETS: Dict[str, Preset] = {
    preset.name: preset
    for preset in (
        Preset("heat_baseline", plan_heat_baseline, evaluate_heat_baseline,
               "L1 error against the heat kernel under grid refinement"),
        Preset("decay_fit", plan_decay_fit, evaluate_decay_fit, "log-log decay slopes of L^p norms"),
        Preset("selfsim_collapse", plan_selfsim_collapse, evaluate_selfsim_collapse,
               "rescaled-profile collapse and the x' marginal identity"),
        Preset("uniqueness", plan_uniqueness, evaluate_uniqueness, "mollifier independence as h -> 0"),
        Preset("sign_preservation", plan_sign_preservation, evaluate_sign_preservation,
               "negative part of perturbed data as h -> 0"),
        Preset("contraction", plan_contraction, evaluate_contraction, "L1 contraction on random pairs"),
        Preset("comparison", plan_comparison, evaluate_comparison, "comparison principle on ordered pairs"),
        Preset("entropy_audit", plan_entropy_audit, evaluate_entropy_audit, "Kruzhkov entropy audit"),
        Preset("tail_report", plan_tail_report, evaluate_tail_report, "tail control and its fitted constant"),
        Preset("sandwich", plan_sandwich, evaluate_sandwich, "x_N-primitive sandwich of slab data"),
        Preset("energy_report", plan_energy_report, evaluate_energy_report, "energy inequality and shifts"),
        Preset("large_time", plan_large_time, evaluate_large_time, "large-time convergence of general data"),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"Unknown preset: {name}")
