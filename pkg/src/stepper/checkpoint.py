"""
Trajectory persistence and resume.

Layout of a checkpoint directory:

    run.json               config record, step count, wall time, snapshot index
    series.csv             the scalar series
    snapshots/snap_NNNNN   one snapshot per recorded time (.f64 + .json)
    initial_field          explicit initial datum, when the config carries one
"""
import json
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import pandas as pd

from ..grid import read_snapshot, write_snapshot
from .config import RunConfig
from .integrator import continue_run
from .trajectory import Trajectory

logger = logging.getLogger(__name__)

RUN_RECORD = "run.json"
SERIES_FILE = "series.csv"
SNAPSHOT_DIR = "snapshots"
INITIAL_FIELD = "initial_field"


def _snapshot_name(index: int) -> str:
    return f"snap_{index:05d}"


def save_trajectory(traj: Trajectory, directory: Union[str, Path]) -> Path:
    """
    Write a trajectory to a checkpoint directory.

    Args:
        traj: Trajectory to store
        directory: Target directory (created if missing)

    Returns:
        The directory path
    """
    base = Path(directory)
    (base / SNAPSHOT_DIR).mkdir(parents=True, exist_ok=True)
    cfg = traj.config

    if cfg.initial_field is not None:
        write_snapshot(cfg.initial_field, base / INITIAL_FIELD, cfg.t_start, cfg.run_id)
    for i, (t, f) in enumerate(zip(traj.times, traj.fields)):
        write_snapshot(f, base / SNAPSHOT_DIR / _snapshot_name(i), t, cfg.run_id, extra={"index": i})

    traj.series.to_csv(base / SERIES_FILE, index=False)
    record = {
        "config": cfg.to_dict(),
        "config_hash": cfg.config_hash(),
        "steps": traj.steps,
        "wall_time": traj.wall_time,
        "times": traj.times,
    }
    (base / RUN_RECORD).write_text(json.dumps(record, indent=2))
    logger.info(f"[CHECKPOINT] run_id={cfg.run_id} | saved {len(traj.times)} snapshots | {base}")
    return base


def load_config(directory: Union[str, Path]) -> RunConfig:
    """Rebuild the RunConfig stored in a checkpoint directory."""
    base = Path(directory)
    record_file = base / RUN_RECORD
    if not record_file.exists():
        raise FileNotFoundError(f"No checkpoint record in {base}")
    record = json.loads(record_file.read_text())
    initial = None
    if record["config"].get("initial_explicit"):
        initial, _ = read_snapshot(base / INITIAL_FIELD)
    return RunConfig.from_dict(record["config"], initial_field=initial)


def load_trajectory(directory: Union[str, Path]) -> Trajectory:
    """
    Read a trajectory written by save_trajectory.

    Raises:
        FileNotFoundError: If the directory holds no checkpoint
        ValueError: If the snapshot index and the files disagree
    """
    base = Path(directory)
    cfg = load_config(base)
    record = json.loads((base / RUN_RECORD).read_text())

    fields = []
    for i, t in enumerate(record["times"]):
        f, meta = read_snapshot(base / SNAPSHOT_DIR / _snapshot_name(i))
        if meta["time"] != t:
            raise ValueError(f"snapshot {i} of {base} is stamped t={meta['time']}, index says t={t}")
        fields.append(f)

    series = pd.read_csv(base / SERIES_FILE, float_precision="round_trip")
    return Trajectory(
        config=cfg,
        times=[float(t) for t in record["times"]],
        fields=fields,
        series=series,
        steps=int(record["steps"]),
        wall_time=float(record["wall_time"]),
    )


def resume(
    directory: Union[str, Path],
    t_end: Optional[float] = None,
    snapshot_times: Sequence[float] = (),
) -> Trajectory:
    """
    Continue a checkpointed run.

    Args:
        directory: Checkpoint directory
        t_end: New end time (defaults to the stored t_end)
        snapshot_times: Additional output times after the recorded end

    Returns:
        The extended trajectory; identical to an uninterrupted run that
        had the checkpoint time among its output times
    """
    traj = load_trajectory(directory)
    cfg = traj.config
    new_end = cfg.t_end if t_end is None else float(t_end)
    times = tuple(sorted(set(cfg.snapshot_times) | set(float(t) for t in snapshot_times)))
    extended = cfg.with_changes(t_end=new_end, snapshot_times=times)
    return continue_run(traj, extended)
