"""
Trajectory: the recorded output of a run.
"""
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..grid import Field
from .config import RunConfig

# columns every series carries, in order; tail_r<radius> columns follow
SERIES_COLUMNS = (
    "step", "time", "dt", "mass", "l1", "l2", "linf", "min", "max",
    "negative_mass", "boundary_mass", "entropy_min",
    "dirichlet_energy", "grad_xprime", "grad_full", "second_moment_xN",
)


def tail_column(radius: float) -> str:
    return f"tail_r{radius:g}"


@dataclass(eq=False)
class Trajectory:
    """
    Time-stamped snapshots plus the scalar time series of a run.

    Attributes:
        config: Configuration that produced the run
        times: Snapshot times, strictly increasing
        fields: Snapshot fields, one per time
        series: One row per recorded step (see SERIES_COLUMNS)
        steps: Number of accepted steps
        wall_time: Seconds spent integrating
    """
    config: RunConfig
    times: List[float] = field(default_factory=list)
    fields: List[Field] = field(default_factory=list)
    series: pd.DataFrame = field(default_factory=lambda: pd.DataFrame(columns=list(SERIES_COLUMNS)))
    steps: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        if len(self.times) != len(self.fields):
            raise ValueError(f"{len(self.times)} snapshot times for {len(self.fields)} fields")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("snapshot times must be strictly increasing")

    @property
    def run_id(self) -> str:
        return self.config.run_id

    @property
    def grid(self):
        return self.config.grid

    @property
    def initial(self) -> Field:
        return self.fields[0]

    @property
    def final(self) -> Field:
        return self.fields[-1]

    @property
    def t_final(self) -> float:
        return self.times[-1]

    def append(self, time: float, f: Field) -> None:
        if self.times and time <= self.times[-1]:
            raise ValueError(f"snapshot at t={time} does not follow t={self.times[-1]}")
        self.times.append(float(time))
        self.fields.append(f)

    def index_of(self, time: float, rel_tol: float = 1e-9) -> int:
        """Index of the snapshot recorded at time (within rel_tol)."""
        i = int(np.searchsorted(self.times, time))
        for j in (i - 1, i):
            if 0 <= j < len(self.times) and math.isclose(self.times[j], time, rel_tol=rel_tol, abs_tol=1e-14):
                return j
        raise KeyError(f"no snapshot at t={time} in run {self.run_id}")

    def field_at(self, time: float) -> Field:
        return self.fields[self.index_of(time)]

    def window(self, t_lo: float, t_hi: float) -> List[Tuple[float, Field]]:
        """Snapshots with t_lo <= t <= t_hi."""
        return [(t, f) for t, f in zip(self.times, self.fields) if t_lo <= t <= t_hi]

    def has_full_stride(self) -> bool:
        """True when every accepted step was kept as a snapshot."""
        return len(self.times) == self.steps + 1

    def column(self, name: str, t_lo: float = 0.0, t_hi: float = math.inf) -> pd.Series:
        """A series column indexed by time, restricted to [t_lo, t_hi]."""
        rows = self.series[(self.series["time"] >= t_lo) & (self.series["time"] <= t_hi)]
        return pd.Series(rows[name].to_numpy(dtype=float), index=rows["time"].to_numpy(dtype=float), name=name)

    def mass_drift(self) -> float:
        """Largest |mass(t) - mass(t_start)| relative to ||u_0||_1."""
        mass = self.series["mass"].to_numpy(dtype=float)
        scale = float(self.series["l1"].iloc[0]) or 1.0
        return float(np.max(np.abs(mass - mass[0])) / scale)

    def snapshot_times_match(self, other: "Trajectory") -> bool:
        return self.times == other.times


def empty_series(tail_radii: Optional[Sequence[float]] = None) -> pd.DataFrame:
    columns = list(SERIES_COLUMNS) + [tail_column(r) for r in (tail_radii or ())]
    return pd.DataFrame(columns=columns)
