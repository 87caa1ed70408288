"""
Uniform cell-centered grids and the discrete fields living on them.

The last axis is always the convection direction x_N. The origin x = 0 sits
at a cell center so that Dirac-like data can be sampled symmetrically.
"""
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ..errors import NonFiniteFieldError

MIN_CELLS = 4
# tolerance (in cells) for "x = 0 is a cell center"
_CENTER_TOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """
    Uniform tensor mesh over a box in R^N, N in {1, 2}.

    Attributes:
        cells: Cell count per axis (x' axes first, x_N last)
        spacing: Cell width per axis
        origin: Coordinate of the low corner of the box
    """
    cells: Tuple[int, ...]
    spacing: Tuple[float, ...]
    origin: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(int(n) for n in self.cells))
        object.__setattr__(self, "spacing", tuple(float(h) for h in self.spacing))
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))

        if self.dim not in (1, 2):
            raise ValueError(f"Grid dimension must be 1 or 2, got {self.dim}")
        if not (len(self.spacing) == len(self.origin) == self.dim):
            raise ValueError("cells, spacing and origin must have one entry per axis")
        for axis, (n, h) in enumerate(zip(self.cells, self.spacing)):
            if n < MIN_CELLS:
                raise ValueError(f"axis {axis}: need at least {MIN_CELLS} cells, got {n}")
            if not h > 0:
                raise ValueError(f"axis {axis}: spacing must be positive, got {h}")
        for axis, (o, h) in enumerate(zip(self.origin, self.spacing)):
            # center of cell i is origin + (i + 1/2) h; 0 must be one of them
            index = -o / h - 0.5
            if abs(index - round(index)) > _CENTER_TOL or not 0 <= round(index) < self.cells[axis]:
                raise ValueError(f"axis {axis}: x = 0 is not a cell center (origin={o}, spacing={h})")

    @classmethod
    def from_bounds(
        cls,
        low: Sequence[float],
        high: Sequence[float],
        spacing: Sequence[float],
    ) -> "Grid":
        """
        Build the smallest grid with 0 at a cell center that covers [low, high].

        Args:
            low: Lower box bound per axis (must be negative)
            high: Upper box bound per axis (must be positive)
            spacing: Cell width per axis

        Returns:
            Grid covering the requested box
        """
        cells, origin = [], []
        for lo, hi, h in zip(low, high, spacing):
            if not lo < 0 < hi:
                raise ValueError(f"box [{lo}, {hi}] must contain the origin in its interior")
            n_low = max(0, math.ceil(-lo / h - 0.5))
            n_high = max(0, math.ceil(hi / h - 0.5))
            cells.append(n_low + n_high + 1)
            origin.append(-(n_low + 0.5) * h)
        return cls(tuple(cells), tuple(float(h) for h in spacing), tuple(origin))

    @classmethod
    def symmetric(cls, half_width: Sequence[float], spacing: Sequence[float]) -> "Grid":
        """Grid covering [-half_width, half_width] on every axis."""
        return cls.from_bounds([-w for w in half_width], list(half_width), spacing)

    @property
    def dim(self) -> int:
        return len(self.cells)

    @property
    def size(self) -> int:
        return int(np.prod(self.cells))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.cells

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def dx_n(self) -> float:
        """Spacing along the convection axis."""
        return self.spacing[-1]

    @property
    def low(self) -> Tuple[float, ...]:
        return self.origin

    @property
    def high(self) -> Tuple[float, ...]:
        return tuple(o + n * h for o, n, h in zip(self.origin, self.cells, self.spacing))

    @property
    def center_index(self) -> Tuple[int, ...]:
        """Index of the cell whose center is x = 0."""
        return tuple(int(round(-o / h - 0.5)) for o, h in zip(self.origin, self.spacing))

    def axis_centers(self, axis: int) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        n, h, o = self.cells[axis], self.spacing[axis], self.origin[axis]
        return o + (np.arange(n) + 0.5) * h

    def cell_centers(self) -> Tuple[np.ndarray, ...]:
        """Cell-center coordinates per axis."""
        return tuple(self.axis_centers(a) for a in range(self.dim))

    def mesh(self) -> Tuple[np.ndarray, ...]:
        """Broadcastable coordinate arrays (sparse meshgrid, ij indexing)."""
        return tuple(np.meshgrid(*self.cell_centers(), indexing="ij", sparse=True))

    def radius(self) -> np.ndarray:
        """|x| at every cell center."""
        return np.sqrt(sum(c ** 2 for c in self.mesh())) * np.ones(self.shape)

    def subgrid_xprime(self) -> "Grid":
        """The (N-1)-dimensional grid of the x' axes (dim 2 only)."""
        if self.dim != 2:
            raise ValueError("x' sub-grid only exists for dim = 2")
        return Grid(self.cells[:-1], self.spacing[:-1], self.origin[:-1])

    def refined(self, factor: int = 2) -> "Grid":
        """Same box with every spacing divided by factor (keeps 0 at a cell center)."""
        return Grid.from_bounds(self.low, self.high, [h / factor for h in self.spacing])

    def contains_box(self, other: "Grid", slack_cells: float = 1.0) -> bool:
        """True when other's box lies inside this box up to slack_cells cells."""
        for lo, hi, olo, ohi, h in zip(self.low, self.high, other.low, other.high, self.spacing):
            if olo < lo - slack_cells * h or ohi > hi + slack_cells * h:
                return False
        return True

    def to_dict(self) -> dict:
        return {"dim": self.dim, "cells": list(self.cells), "spacing": list(self.spacing),
                "origin": list(self.origin)}

    @classmethod
    def from_dict(cls, data: dict) -> "Grid":
        return cls(tuple(data["cells"]), tuple(data["spacing"]), tuple(data["origin"]))


@dataclass(frozen=True, eq=False)
class Field:
    """
    Cell-averaged scalar function on a Grid.

    Values are stored as a read-only float64 array shaped like grid.cells.
    """
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.size != self.grid.size:
            raise ValueError(f"expected {self.grid.size} values for grid {self.grid.cells}, got {values.size}")
        values = values.reshape(self.grid.shape)
        if not np.all(np.isfinite(values)):
            bad = int(np.count_nonzero(~np.isfinite(values)))
            raise NonFiniteFieldError(f"Field has {bad} non-finite values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid, func) -> "Field":
        """Sample func(*mesh) at the cell centers."""
        return cls(grid, np.broadcast_to(func(*grid.mesh()), grid.shape))

    def with_values(self, values: np.ndarray) -> "Field":
        return Field(self.grid, values)

    def __add__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_grid(self, other)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)

    def positive_part(self) -> "Field":
        return Field(self.grid, np.maximum(self.values, 0.0))

    def negative_part(self) -> "Field":
        return Field(self.grid, np.maximum(-self.values, 0.0))

    @property
    def min(self) -> float:
        return float(self.values.min())

    @property
    def max(self) -> float:
        return float(self.values.max())

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


def _check_same_grid(a: Field, b: Field) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
