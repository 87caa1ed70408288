"""
Experiment config files: parsing, validation and the ExperimentSpec they produce.

A config is a JSON object with flat dotted keys, e.g.

    {
      "preset": "decay_fit",
      "grid.half_width": [200.0],
      "grid.spacing": [0.05],
      "operator.kind": "reduced",
      "flux.q": 0.75,
      "time.end": 100.0
    }

A key group may also be written as one nested object ("flux": {"q": 0.75});
nothing deeper is accepted.
"""
import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..errors import ConfigError
from ..flux import FluxParams, default_eta
from ..grid import Grid
from ..stepper import InitialRecipe, OperatorChoice, RunConfig
from .schema import PRESETS, defaults_for, keys_for, coerce

logger = logging.getLogger(__name__)


@dataclass
class ExperimentSpec:
    """
    A validated experiment.

    Attributes:
        preset: Preset name
        base: Base RunConfig shared by the preset's runs
        params: Preset parameters with defaults filled (keys without the "params." prefix)
        values: Every config key with its effective value (the stored config.json)
        output: Report directory name
        source: File the spec was read from
    """
    preset: str
    base: RunConfig
    params: Dict[str, Any]
    values: Dict[str, Any] = field(default_factory=dict)
    output: str = ""
    source: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        """Flat config record; inf norms are written as "inf", unset optional keys are left out."""
        out = {}
        for key, value in self.values.items():
            if value is None:
                continue
            if isinstance(value, list):
                value = ["inf" if v == math.inf else v for v in value]
            out[key] = value
        return out


def _key_line(text: str, key: str, occurrence: int = 0) -> Optional[int]:
    """1-based line of the n-th occurrence of "key": in the text."""
    pattern = re.compile(r'"' + re.escape(key) + r'"\s*:')
    for n, match in enumerate(pattern.finditer(text)):
        if n == occurrence:
            return text.count("\n", 0, match.start()) + 1
    return None


def _load_pairs(text: str) -> List[Tuple[str, Any, int]]:
    """Top-level (dotted key, value, line) triples; rejects duplicates and deep nesting."""
    seen: Dict[str, int] = {}

    def hook(pairs):
        counts: Dict[str, int] = {}
        for key, _ in pairs:
            counts[key] = counts.get(key, 0) + 1
            if counts[key] > 1:
                raise ConfigError(f"duplicate key '{key}'", line=_key_line(text, key, 1), key=key)
        return pairs

    try:
        top = json.loads(text, object_pairs_hook=hook)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", line=e.lineno)
    if not isinstance(top, list) or not all(isinstance(p, tuple) for p in top):
        raise ConfigError("config must be a JSON object", line=1)

    flat = []
    for key, value in top:
        if isinstance(value, list) and value and all(isinstance(v, tuple) for v in value):
            for sub_key, sub_value in value:
                dotted = f"{key}.{sub_key}"
                if isinstance(sub_value, list) and sub_value and all(isinstance(v, tuple) for v in sub_value):
                    raise ConfigError(f"key '{dotted}' nests deeper than two levels",
                                      line=_key_line(text, sub_key), key=dotted)
                flat.append((dotted, sub_value, _key_line(text, sub_key) or _key_line(text, key)))
        else:
            flat.append((key, value, _key_line(text, key)))
    for dotted, _, line in flat:
        if dotted in seen:
            raise ConfigError(f"duplicate key '{dotted}'", line=line, key=dotted)
        seen[dotted] = line
    return flat


def _build_base(values: Dict[str, Any], lines: Dict[str, Optional[int]], preset: str) -> RunConfig:
    """RunConfig from the effective key values; errors point at the first key of the failing group."""

    def fail(group: str, error: Exception):
        candidates = [k for k in lines if k == group or k.startswith(group + ".")]
        line = min((lines[k] for k in candidates if lines[k] is not None), default=None)
        raise ConfigError(str(error), line=line, key=candidates[0] if candidates else group)

    half, spacing = values["grid.half_width"], values["grid.spacing"]
    try:
        if not half:
            raise ValueError("grid.half_width must list at least one axis")
        if len(spacing) == 1:
            spacing = spacing * len(half)
        if len(spacing) != len(half):
            raise ValueError(f"grid.spacing has {len(spacing)} entries for {len(half)} axes")
        if any(h <= 0 for h in half) or any(s <= 0 for s in spacing):
            raise ValueError("grid half widths and spacings must be positive")
        grid = Grid.symmetric(half, spacing)
    except ValueError as e:
        fail("grid", e)

    try:
        operator = OperatorChoice(kind=values["operator.kind"], eps=values["operator.eps"])
    except ValueError as e:
        fail("operator", e)

    try:
        flux = FluxParams(
            q=values["flux.q"],
            eta=values["flux.eta"] if values["flux.eta"] is not None else default_eta(grid.dx_n),
            odd_extension=values["flux.odd_extension"],
            enabled=values["flux.enabled"],
            u_floor=values["flux.u_floor"],
        )
        flux.validate(grid.dim)
    except ValueError as e:
        fail("flux", e)

    try:
        initial = InitialRecipe(
            kind=values["initial.kind"],
            width=values["initial.width"],
            t0=values["initial.t0"],
            offset=values["initial.offset"],
        )
    except ValueError as e:
        fail("initial", e)

    try:
        return RunConfig(
            grid=grid,
            operator=operator,
            flux=flux,
            mass=values["mass"],
            initial=initial,
            t_start=values["time.start"],
            t_end=values["time.end"],
            cfl=values["solver.cfl"],
            theta=values["solver.theta"],
            lin_tol=values["solver.lin_tol"],
            snapshot_times=tuple(values["time.snapshots"]),
            boundary_leak_tol=values["run.boundary_leak_tol"],
            dt_max=values["solver.dt_max"],
            max_iter=values["solver.max_iter"],
            solver=values["solver.method"],
            record_steps=values["run.record_steps"],
            series_stride=values["run.series_stride"],
            tail_radii=tuple(values["run.tail_radii"]),
            entropy_levels=tuple(values["run.entropy_levels"]),
            run_id=values["run.id"] or preset,
        )
    except ValueError as e:
        message = str(e)
        group = "time" if ("snapshot" in message or "t_end" in message) else "solver"
        if "series_stride" in message or "boundary_leak" in message:
            group = "run"
        fail(group, e)


def parse_config_text(text: str, source: Optional[Path] = None) -> ExperimentSpec:
    """
    Parse and validate config text.

    Raises:
        ConfigError: On invalid JSON, unknown, duplicate or mistyped keys and out-of-range values
    """
    pairs = _load_pairs(text)
    lines = {key: line for key, _, line in pairs}
    given = {key: value for key, value, _ in pairs}

    preset = given.get("preset")
    if preset is None:
        raise ConfigError("missing required key 'preset'", line=1, key="preset")
    if preset not in PRESETS:
        raise ConfigError(f"unknown preset '{preset}' (one of {', '.join(PRESETS)})",
                          line=lines.get("preset"), key="preset")

    schema = keys_for(preset)
    values = defaults_for(preset)
    for key, value in given.items():
        if key not in schema:
            raise ConfigError(f"unknown key '{key}' for preset {preset}", line=lines[key], key=key)
        ok, coerced = coerce(schema[key].kind, value)
        if not ok:
            raise ConfigError(f"key '{key}' expects {schema[key].kind}, got {json.dumps(value)}",
                              line=lines[key], key=key)
        values[key] = coerced

    base = _build_base(values, lines, preset)
    params = {key[len("params."):]: value for key, value in values.items() if key.startswith("params.")}
    spec = ExperimentSpec(
        preset=preset,
        base=base,
        params=params,
        values=values,
        output=values["output"] or preset,
        source=source,
    )
    logger.info(f"[CONFIG] preset={preset} | grid={base.grid.cells} | q={base.flux.q:g} | operator={base.operator.kind}")
    return spec


def parse_config(path: Union[str, Path]) -> ExperimentSpec:
    """
    Read an experiment config file.

    Raises:
        ConfigError: If the file is unreadable or invalid
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}")
    return parse_config_text(text, source=path)
