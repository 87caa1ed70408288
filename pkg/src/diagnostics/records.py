"""
Structured pass/fail records emitted by every check.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Sequence

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class CheckRecord:
    """
    Outcome of one check.

    Attributes:
        name: Check name, unique within a report
        measured: Measured value
        tolerance: Threshold the measured value is compared against
        passed: Outcome
        provenance: Where the tolerance comes from
        asserted: False for report-only rows (they never fail a report)
        details: Extra context (run ids, times, ...)
    """
    name: str
    measured: float
    tolerance: float
    passed: bool
    provenance: str
    asserted: bool = True
    details: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.measured = float(self.measured)
        self.tolerance = float(self.tolerance)
        self.passed = bool(self.passed)
        level = logging.INFO if self.passed or not self.asserted else logging.WARNING
        status = "pass" if self.passed else "FAIL"
        logger.log(level, f"[CHECK] {self.name} | {status} | measured={self.measured:.6g} | tol={self.tolerance:.3g}")

    @property
    def failed(self) -> bool:
        return self.asserted and not self.passed

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ("measured", "tolerance"):
            if not math.isfinite(data[key]):
                data[key] = str(data[key])
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckRecord":
        values = dict(data)
        for key in ("measured", "tolerance"):
            values[key] = float(values[key])
        return cls(**values)


def at_most(name: str, measured: float, tolerance: float, provenance: str, **details) -> CheckRecord:
    """Pass when measured <= tolerance."""
    return CheckRecord(name, measured, tolerance, measured <= tolerance, provenance, details=details)


def at_least(name: str, measured: float, tolerance: float, provenance: str, **details) -> CheckRecord:
    """Pass when measured >= tolerance."""
    return CheckRecord(name, measured, tolerance, measured >= tolerance, provenance, details=details)


def reported(name: str, measured: float, provenance: str, **details) -> CheckRecord:
    """A report-only row."""
    return CheckRecord(name, measured, math.nan, True, provenance, asserted=False, details=details)


def worst_increase(values: Sequence[float]) -> float:
    """Largest step-to-step increase of a sequence (0 for a nonincreasing one)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 2:
        return 0.0
    return float(max(0.0, np.max(np.diff(v))))


def is_strictly_decreasing(values: Sequence[float]) -> bool:
    v = np.asarray(values, dtype=np.float64)
    return bool(np.all(np.diff(v) < 0))


def all_passed(records: Sequence[CheckRecord]) -> bool:
    return not any(r.failed for r in records)
