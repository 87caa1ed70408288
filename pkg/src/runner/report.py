"""
Report directories.

    <root>/<output>/
        config.json        effective experiment config (flat keys)
        metadata.json      config hash, code version, wall time, per-run config hashes
        summary.json       check records and the overall outcome
        tables/<name>.csv  report tables
        runs/<run_id>/     persisted trajectories (checkpoint layout)
        failures.json      only when runs or the evaluation failed
        plotdata/          written later by emit_plotdata
"""
import hashlib
import json
import logging
import math
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Union

import numpy as np
import pandas as pd

from .. import __version__
from ..diagnostics import CheckRecord, all_passed
from ..grid import primitive_xN
from ..selfsim import exponents
from ..stepper import Trajectory, load_trajectory, save_trajectory

logger = logging.getLogger(__name__)

CONFIG_FILE = "config.json"
METADATA_FILE = "metadata.json"
SUMMARY_FILE = "summary.json"
FAILURES_FILE = "failures.json"
TABLES_DIR = "tables"
RUNS_DIR = "runs"
PLOTDATA_DIR = "plotdata"


def config_hash(values: Dict[str, Any]) -> str:
    canonical = json.dumps(values, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _json_safe(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


@dataclass
class Report:
    """
    Everything one executed config produced.

    Attributes:
        preset: Preset name
        config: Effective flat config
        tables: Report tables by name
        records: Check records
        trajectories: Runs by run_id
        failures: Failure manifest entries (run ids, error type, message)
        wall_time: Seconds spent running and evaluating
    """
    preset: str
    config: Dict[str, Any]
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    records: List[CheckRecord] = field(default_factory=list)
    trajectories: Dict[str, Trajectory] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        """All asserted checks passed and nothing failed."""
        return not self.failures and all_passed(self.records)

    def summary(self) -> Dict[str, Any]:
        failed = [r.name for r in self.records if r.failed]
        return {
            "preset": self.preset,
            "passed": self.passed,
            "checks": len(self.records),
            "failed_checks": failed,
            "failures": len(self.failures),
            "records": [r.to_dict() for r in self.records],
        }

    def metadata(self) -> Dict[str, Any]:
        return {
            "preset": self.preset,
            "config_hash": config_hash(self.config),
            "code_version": __version__,
            "wall_time": self.wall_time,
            "written_at": datetime.now(timezone.utc).isoformat(),
            "runs": {name: traj.config.config_hash() for name, traj in sorted(self.trajectories.items())},
        }

    def _write_results(self, directory: Path) -> None:
        """summary.json, tables/ and failures.json into directory."""
        (directory / SUMMARY_FILE).write_text(json.dumps(_json_safe(self.summary()), indent=2))
        tables = directory / TABLES_DIR
        tables.mkdir(parents=True, exist_ok=True)
        for name, table in self.tables.items():
            table.to_csv(tables / f"{name}.csv", index=False)
        if self.failures:
            (directory / FAILURES_FILE).write_text(json.dumps(_json_safe(self.failures), indent=2))

    def write(self, directory: Union[str, Path]) -> Path:
        """
        Write the full report atomically: build it in a sibling temp dir, then rename.

        An existing report at the same path is replaced.
        """
        target = Path(directory)
        target.parent.mkdir(parents=True, exist_ok=True)
        staging = Path(tempfile.mkdtemp(prefix=f".{target.name}-", dir=target.parent))
        try:
            (staging / CONFIG_FILE).write_text(json.dumps(self.config, indent=2))
            (staging / METADATA_FILE).write_text(json.dumps(_json_safe(self.metadata()), indent=2))
            self._write_results(staging)
            for name, traj in self.trajectories.items():
                save_trajectory(traj, staging / RUNS_DIR / name)
            if target.exists():
                shutil.rmtree(target)
            os.replace(staging, target)
        except Exception:
            shutil.rmtree(staging, ignore_errors=True)
            raise
        logger.info(f"[REPORT] {target} | passed={self.passed} | checks={len(self.records)} | failures={len(self.failures)}")
        return target

    def rewrite_results(self, directory: Union[str, Path]) -> Path:
        """Replace summary, tables and failure manifest of an existing report (runs are kept)."""
        target = Path(directory)
        staging = Path(tempfile.mkdtemp(prefix=".results-", dir=target))
        try:
            self._write_results(staging)
            old_tables = target / TABLES_DIR
            if old_tables.exists():
                shutil.rmtree(old_tables)
            os.replace(staging / TABLES_DIR, old_tables)
            os.replace(staging / SUMMARY_FILE, target / SUMMARY_FILE)
            if self.failures:
                os.replace(staging / FAILURES_FILE, target / FAILURES_FILE)
            elif (target / FAILURES_FILE).exists():
                (target / FAILURES_FILE).unlink()
        finally:
            shutil.rmtree(staging, ignore_errors=True)
        logger.info(f"[REPORT] {target} | re-evaluated | passed={self.passed}")
        return target


def load_report(directory: Union[str, Path]) -> Report:
    """
    Read a report directory back (config, tables, records, runs).

    Raises:
        FileNotFoundError: If directory holds no report
    """
    base = Path(directory)
    if not (base / CONFIG_FILE).exists():
        raise FileNotFoundError(f"No report in {base}")
    config = json.loads((base / CONFIG_FILE).read_text())
    records, wall_time = [], 0.0
    if (base / SUMMARY_FILE).exists():
        summary = json.loads((base / SUMMARY_FILE).read_text())
        records = [CheckRecord.from_dict(r) for r in summary.get("records", [])]
    if (base / METADATA_FILE).exists():
        wall_time = float(json.loads((base / METADATA_FILE).read_text()).get("wall_time", 0.0))
    tables = {}
    if (base / TABLES_DIR).exists():
        for path in sorted((base / TABLES_DIR).glob("*.csv")):
            tables[path.stem] = pd.read_csv(path, float_precision="round_trip")
    trajectories = {}
    if (base / RUNS_DIR).exists():
        for path in sorted(p for p in (base / RUNS_DIR).iterdir() if p.is_dir()):
            trajectories[path.name] = load_trajectory(path)
    failures = []
    if (base / FAILURES_FILE).exists():
        failures = json.loads((base / FAILURES_FILE).read_text())
    return Report(config.get("preset", ""), config, tables, records, trajectories, failures, wall_time)


def _loglog(traj: Trajectory, column: str) -> pd.DataFrame:
    series = traj.series
    t = series["time"].to_numpy(dtype=float)
    norms = series[column].to_numpy(dtype=float)
    keep = (t > 0) & (norms > 0)
    return pd.DataFrame({"log_t": np.log(t[keep]), "log_norm": np.log(norms[keep])}, columns=["log_t", "log_norm"])


def _profile_slices(traj: Trajectory) -> Dict[str, pd.DataFrame]:
    """x_N slices through the x' center, raw and rescaled, per snapshot."""
    grid = traj.grid
    e = exponents(grid.dim, traj.config.flux.q)
    center = grid.center_index[:-1]
    x_n = grid.axis_centers(grid.dim - 1)
    slices = {}
    for i, (t, f) in enumerate(zip(traj.times, traj.fields)):
        line = f.values[center]
        frame = {"x_N": x_n, "u": line, "primitive": primitive_xN(f).values[center]}
        if t > 0:
            frame["xi_N"] = x_n / t ** e.beta
            frame["profile"] = t ** e.alpha * line
        slices[f"profile_{traj.run_id}_{i:03d}"] = pd.DataFrame(frame)
    return slices


def emit_plotdata(report: Report, directory: Union[str, Path]) -> List[Path]:
    """
    Per-figure CSVs under <directory>/plotdata/.

    Every table is copied; every run gets log t vs log norm files for
    p = 1, 2, inf; selfsim_collapse runs also get profile slices per snapshot.
    """
    out = Path(directory) / PLOTDATA_DIR
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, frame: pd.DataFrame) -> None:
        path = out / f"{name}.csv"
        frame.to_csv(path, index=False)
        written.append(path)

    for name, table in report.tables.items():
        emit(f"table_{name}", table)
    for name, traj in sorted(report.trajectories.items()):
        for column, label in (("l1", "p1"), ("l2", "p2"), ("linf", "pinf")):
            emit(f"loglog_{name}_{label}", _loglog(traj, column))
        if report.preset == "selfsim_collapse":
            for slice_name, frame in _profile_slices(traj).items():
                emit(slice_name, frame)
    logger.info(f"[PLOTDATA] {out} | files={len(written)}")
    return written
