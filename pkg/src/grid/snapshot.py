"""
Field snapshot files.

A snapshot is a flat little-endian float64 payload in row-major order
(x' axes first, x_N last) plus a JSON sidecar with the grid, time and run id.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

from .mesh import Field, Grid

logger = logging.getLogger(__name__)

PAYLOAD_SUFFIX = ".f64"
SIDECAR_SUFFIX = ".json"
_DTYPE = np.dtype("<f8")


def write_snapshot(
    field: Field,
    path: Union[str, Path],
    time: float,
    run_id: str,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write a field snapshot.

    Args:
        field: Field to store
        path: Target path without suffix
        time: Time stamp of the snapshot
        run_id: Run identifier
        extra: Optional additional sidecar entries

    Returns:
        Path of the payload file
    """
    base = Path(path)
    base.parent.mkdir(parents=True, exist_ok=True)
    payload = base.with_suffix(PAYLOAD_SUFFIX)
    sidecar = base.with_suffix(SIDECAR_SUFFIX)

    payload.write_bytes(np.ascontiguousarray(field.values, dtype=_DTYPE).tobytes(order="C"))
    meta = {**field.grid.to_dict(), "time": float(time), "run_id": run_id}
    if extra:
        meta.update(extra)
    sidecar.write_text(json.dumps(meta, indent=2))
    logger.debug(f"Wrote snapshot {payload.name} | t={time:.6g} | run_id={run_id}")
    return payload


def read_snapshot(path: Union[str, Path]) -> Tuple[Field, Dict[str, Any]]:
    """
    Read a snapshot written by write_snapshot.

    Args:
        path: Payload path, sidecar path, or the common base path

    Returns:
        Tuple of (field, sidecar metadata)
    """
    base = Path(path)
    if base.suffix in (PAYLOAD_SUFFIX, SIDECAR_SUFFIX):
        base = base.with_suffix("")
    sidecar = base.with_suffix(SIDECAR_SUFFIX)
    payload = base.with_suffix(PAYLOAD_SUFFIX)
    if not sidecar.exists() or not payload.exists():
        raise FileNotFoundError(f"Snapshot not found: {base}")

    meta = json.loads(sidecar.read_text())
    grid = Grid.from_dict(meta)
    values = np.frombuffer(payload.read_bytes(), dtype=_DTYPE)
    if values.size != grid.size:
        raise ValueError(f"Snapshot {payload.name} holds {values.size} values, grid needs {grid.size}")
    return Field(grid, values.reshape(grid.shape)), meta
