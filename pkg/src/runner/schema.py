"""
Key reference of experiment config files.

Every key is flat and dotted ("flux.q"); the value kinds are

    float, int, bool, str      scalars
    floats                     list of numbers (a bare number is a one-element list)
    norms                      list of numbers >= 1 or the string "inf"
    optional_float             number or null
"""
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple


@dataclass(frozen=True)
class Key:
    """One config key: value kind, default and a one-line description."""
    kind: str
    default: Any
    doc: str
    required: bool = False


PRESETS = (
    "heat_baseline",
    "decay_fit",
    "selfsim_collapse",
    "uniqueness",
    "sign_preservation",
    "contraction",
    "comparison",
    "entropy_audit",
    "tail_report",
    "sandwich",
    "energy_report",
    "large_time",
)

BASE_KEYS: Dict[str, Key] = {
    "preset": Key("str", None, "experiment preset", required=True),
    "output": Key("str", None, "report directory name under the output root (default: preset name)"),
    "grid.half_width": Key("floats", [20.0], "box half width per axis; its length sets the dimension"),
    "grid.spacing": Key("floats", [0.02], "cell width per axis (one value is used for every axis)"),
    "operator.kind": Key("str", "full", "full | reduced | reduced_eps"),
    "operator.eps": Key("float", 0.0, "x_N diffusion of reduced_eps"),
    "flux.q": Key("float", 0.75, "convection exponent, q > 1 - 1/N"),
    "flux.eta": Key("optional_float", None, "flux regularization (null: dx_N^2)"),
    "flux.odd_extension": Key("bool", True, "odd extension of f_eta to u < 0"),
    "flux.enabled": Key("bool", True, "convection switch"),
    "flux.u_floor": Key("optional_float", None, "CFL floor on |u| when eta = 0"),
    "initial.kind": Key("str", "gaussian", "gaussian | box | bump | heat_kernel | two_bumps"),
    "initial.width": Key("float", 0.1, "mollifier width h"),
    "initial.t0": Key("float", 0.01, "heat-kernel warm start time"),
    "initial.offset": Key("float", 0.0, "bump offset along x_N for two_bumps"),
    "mass": Key("float", 1.0, "mass M of the initial datum"),
    "time.start": Key("float", 0.0, "t_start"),
    "time.end": Key("float", 1.0, "t_end"),
    "time.snapshots": Key("floats", [], "snapshot times"),
    "solver.cfl": Key("float", 0.5, "CFL number in (0, 1]"),
    "solver.theta": Key("float", 1.0, "implicitness in [1/2, 1]"),
    "solver.lin_tol": Key("float", 1e-10, "relative residual of the implicit solve"),
    "solver.dt_max": Key("float", 1e-2, "step cap"),
    "solver.max_iter": Key("int", 5000, "iteration budget of CG"),
    "solver.method": Key("str", "auto", "auto | cg | banded"),
    "run.id": Key("str", None, "run identifier prefix (default: preset name)"),
    "run.boundary_leak_tol": Key("float", 1e-8, "boundary-cell mass fraction that aborts a run"),
    "run.series_stride": Key("int", 1, "record the series every this many steps"),
    "run.record_steps": Key("bool", False, "keep every step as a snapshot"),
    "run.tail_radii": Key("floats", [], "radii of the tail_mass series columns"),
    "run.entropy_levels": Key("floats", [0.0], "levels of the online cell entropy summary"),
}

PRESET_KEYS: Dict[str, Dict[str, Key]] = {
    "heat_baseline": {
        "params.spacings": Key("floats", [0.04, 0.02, 0.01], "grid spacings, each half the previous"),
        "params.rate": Key("float", 4.0, "expected error reduction per halving"),
        "params.rate_tol": Key("float", 0.25, "relative tolerance on the reduction factor"),
    },
    "decay_fit": {
        "params.norms": Key("norms", [2.0, math.inf], "norm exponents p"),
        "params.t_min": Key("optional_float", None, "fit window start (null: 10 t0)"),
        "params.t_max": Key("optional_float", None, "fit window end (null: t_end)"),
        "params.rel_tol": Key("float", 0.05, "relative tolerance on the slope"),
        "params.compare_full": Key("bool", True, "repeat the run with the full Laplacian"),
    },
    "selfsim_collapse": {
        "params.times": Key("floats", [1.0, 4.0, 16.0], "t of the pairs (t, 4t)"),
        "params.final_ratio": Key("float", 0.25, "last distance / first distance bound"),
        "params.marginal_tol": Key("float", 5e-3, "marginal identity tolerance, relative to M"),
        "params.max_cells": Key("int", 4096, "cells per axis of the profile grid"),
    },
    "uniqueness": {
        "params.widths": Key("floats", [0.4, 0.2, 0.1, 0.05], "mollifier widths h_k, decreasing"),
        "params.recipe_a": Key("str", "gaussian", "first mollifier shape"),
        "params.recipe_b": Key("str", "box", "second mollifier shape"),
        "params.t_star": Key("float", 1.0, "comparison time"),
        "params.error_floor": Key("optional_float", None, "explicit grid-error floor (null: measured or not asserted)"),
        "params.floor_spacing": Key("optional_float", None, "spacing of the heat run measuring the floor (null: no run)"),
        "params.floor_t0": Key("float", 0.01, "heat-kernel warm start of the floor run"),
        "params.floor_dt_max": Key("float", 1e-3, "step cap of the floor run"),
    },
    "sign_preservation": {
        "params.widths": Key("floats", [0.8, 0.4, 0.2, 0.1, 0.05], "dipole widths h_k, decreasing"),
        "params.amplitude": Key("float", 0.5, "dipole amplitude relative to max of the mollifier"),
        "params.restart_time": Key("optional_float", None, "t_j of the positive-part restart (null: skipped)"),
    },
    "contraction": {
        "params.pairs": Key("int", 20, "number of random pairs"),
        "params.seed": Key("int", 0, "random seed"),
        "params.perturbation": Key("float", 0.5, "bump amplitude relative to max of the base datum"),
    },
    "comparison": {
        "params.pairs": Key("int", 20, "number of random ordered pairs"),
        "params.seed": Key("int", 0, "random seed"),
        "params.perturbation": Key("float", 0.5, "bump amplitude relative to max of the base datum"),
    },
    "entropy_audit": {
        "params.levels": Key("int", 32, "equispaced entropy levels (k = 0 is added)"),
        "params.bumps": Key("int", 20, "test bumps"),
        "params.tol_factor": Key("float", 1e-6, "Kruzhkov residual tolerance relative to M"),
        "params.cell_tol_factor": Key("float", 1e-8, "cell entropy tolerance relative to M"),
        "params.reversed": Key("bool", True, "also audit the time-reversed run (must fail)"),
    },
    "tail_report": {
        "params.radii": Key("floats", [10.0], "tail radii R"),
        "params.bound_factor": Key("float", 10.0, "bound on the fitted constant c"),
        "params.refine": Key("bool", True, "repeat on a grid of half the spacing"),
        "params.enlarge": Key("float", 2.0, "domain enlargement factor (1: skipped)"),
        "params.stability": Key("float", 2.0, "allowed factor between fitted constants"),
    },
    "sandwich": {
        "params.r": Key("float", 0.5, "slab half width r"),
        "params.shift_cells": Key("int", 2, "x_N shift of the second datum, in cells"),
        "params.tol_factor": Key("float", 1e-6, "violation tolerance relative to M"),
    },
    "energy_report": {
        "params.taus": Key("floats", [0.1], "lower ends tau of the energy integral"),
        "params.slack": Key("float", 1e-3, "relative slack of the energy inequality"),
        "params.shifts": Key("floats", [0.32, 0.16, 0.08, 0.04], "x_N shifts of the shift functional"),
        "params.shift_time": Key("optional_float", None, "time of the shift table (null: t_end)"),
    },
    "large_time": {
        "params.general_kind": Key("str", "two_bumps", "shape of the general datum"),
        "params.general_width": Key("float", 0.2, "width of the general datum"),
        "params.general_offset": Key("float", 0.5, "offset of the general datum"),
        "params.times": Key("floats", [1.0, 2.0, 4.0, 8.0], "comparison times"),
        "params.norms": Key("norms", [1.0, 2.0, math.inf], "norm exponents p"),
        "params.narrow_width": Key("float", 0.05, "width of the reference mollifier"),
    },
}


def keys_for(preset: str) -> Dict[str, Key]:
    """All keys a config of the given preset may set."""
    keys = dict(BASE_KEYS)
    keys.update(PRESET_KEYS.get(preset, {}))
    return keys


def defaults_for(preset: str) -> Dict[str, Any]:
    return {name: key.default for name, key in keys_for(preset).items()}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def coerce(kind: str, value: Any) -> Tuple[bool, Any]:
    """
    Check a JSON value against a key kind.

    Returns:
        Tuple of (ok, coerced value)
    """
    if kind == "float":
        return (True, float(value)) if _is_number(value) else (False, None)
    if kind == "optional_float":
        if value is None:
            return True, None
        return (True, float(value)) if _is_number(value) else (False, None)
    if kind == "int":
        return (True, value) if isinstance(value, int) and not isinstance(value, bool) else (False, None)
    if kind == "bool":
        return (True, value) if isinstance(value, bool) else (False, None)
    if kind == "str":
        return (True, value) if isinstance(value, str) else (False, None)
    if kind == "floats":
        if _is_number(value):
            return True, [float(value)]
        if isinstance(value, list) and all(_is_number(v) for v in value):
            return True, [float(v) for v in value]
        return False, None
    if kind == "norms":
        items = value if isinstance(value, list) else [value]
        out = []
        for v in items:
            if v == "inf":
                out.append(math.inf)
            elif _is_number(v) and v >= 1:
                out.append(float(v))
            else:
                return False, None
        return True, out
    raise ValueError(f"Unknown key kind: {kind}")
