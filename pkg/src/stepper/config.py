"""
Run configuration: operator choice, initial-data recipe and solver knobs.
"""
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Literal, Optional, Tuple

from ..flux import FluxParams, default_eta
from ..grid import Field, Grid

OperatorKind = Literal["full", "reduced", "reduced_eps"]
RecipeKind = Literal["gaussian", "box", "bump", "heat_kernel", "two_bumps"]
SolverMethod = Literal["auto", "cg", "banded"]


@dataclass(frozen=True)
class OperatorChoice:
    """
    Diffusion operator L.

    kind:
      full        -> -Laplacian
      reduced     -> -Laplacian in x' only (no diffusion at all in dim 1)
      reduced_eps -> reduced plus -eps d^2/dx_N^2
    """
    kind: OperatorKind = "full"
    eps: float = 0.0

    def __post_init__(self):
        if self.kind not in ("full", "reduced", "reduced_eps"):
            raise ValueError(f"Unknown operator kind: {self.kind}")
        if self.eps < 0:
            raise ValueError(f"eps must be >= 0, got {self.eps}")

    def axis_weights(self, dim: int) -> Tuple[float, ...]:
        """Diffusion coefficient per axis (x' axes first, x_N last)."""
        xprime = (1.0,) * (dim - 1)
        if self.kind == "full":
            return xprime + (1.0,)
        if self.kind == "reduced":
            return xprime + (0.0,)
        return xprime + (self.eps,)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class InitialRecipe:
    """
    Initial-data recipe.

    Attributes:
        kind: gaussian (std h), box (side h), bump (C-inf mollifier of radius h),
              heat_kernel (Gamma_N(t0)), two_bumps (gaussians of std h at +-offset along x_N)
        width: h
        t0: Heat-kernel time for warm starts
        offset: Bump separation for two_bumps
    """
    kind: RecipeKind = "gaussian"
    width: float = 0.1
    t0: float = 0.01
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "box", "bump", "heat_kernel", "two_bumps"):
            raise ValueError(f"Unknown initial recipe: {self.kind}")
        if self.kind == "heat_kernel" and not self.t0 > 0:
            raise ValueError(f"heat_kernel recipe needs t0 > 0, got {self.t0}")
        if self.kind != "heat_kernel" and not self.width > 0:
            raise ValueError(f"recipe width must be positive, got {self.width}")

    @property
    def effective_width(self) -> float:
        """Length scale compared against 2 dx for resolvability."""
        if self.kind == "heat_kernel":
            return math.sqrt(2.0 * self.t0)
        return self.width

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """
    Everything a single run needs.

    Attributes:
        grid: Spatial grid
        operator: Diffusion operator
        flux: Convection flux (eta = None means the default (dx_N)^2)
        mass: M, the mass of the initial datum
        initial: Initial-data recipe
        t_start, t_end: Time window
        cfl: CFL number in (0, 1]
        theta: Implicitness in [1/2, 1]
        lin_tol: Relative residual tolerance of the implicit solve
        snapshot_times: Times at which snapshots are stored
        boundary_leak_tol: Abort when boundary cells hold more than this fraction of |M|
        dt_max: Step cap, used when the flux Lipschitz constant vanishes
        max_iter: Iteration budget of the iterative solver
        solver: auto (banded when one axis diffuses, CG otherwise), cg or banded
        record_steps: Keep every accepted step as a snapshot
        series_stride: Record the scalar series every this many steps
        tail_radii: Radii r for the tail_mass columns of the series
        entropy_levels: Levels k for the online cell entropy summary
        run_id: Identifier used in logs and snapshot files
        initial_field: Explicit initial datum overriding the recipe
    """
    grid: Grid
    operator: OperatorChoice = field(default_factory=OperatorChoice)
    flux: FluxParams = field(default_factory=lambda: FluxParams(q=0.75))
    mass: float = 1.0
    initial: InitialRecipe = field(default_factory=InitialRecipe)
    t_start: float = 0.0
    t_end: float = 1.0
    cfl: float = 0.5
    theta: float = 1.0
    lin_tol: float = 1e-10
    snapshot_times: Tuple[float, ...] = ()
    boundary_leak_tol: float = 1e-8
    dt_max: float = 1e-2
    max_iter: int = 5000
    solver: SolverMethod = "auto"
    record_steps: bool = False
    series_stride: int = 1
    tail_radii: Tuple[float, ...] = ()
    entropy_levels: Tuple[float, ...] = (0.0,)
    run_id: str = "run"
    initial_field: Optional[Field] = None

    def __post_init__(self):
        object.__setattr__(self, "snapshot_times", tuple(sorted(float(t) for t in self.snapshot_times)))
        object.__setattr__(self, "tail_radii", tuple(float(r) for r in self.tail_radii))
        object.__setattr__(self, "entropy_levels", tuple(float(k) for k in self.entropy_levels))
        if self.flux.eta is None:
            object.__setattr__(self, "flux", replace(self.flux, eta=default_eta(self.grid.dx_n)))
        self.validate()

    def validate(self) -> None:
        """Raise ValueError on any out-of-range knob."""
        self.flux.validate(self.grid.dim)
        if not self.t_end >= self.t_start >= 0:
            raise ValueError(f"need t_end >= t_start >= 0, got [{self.t_start}, {self.t_end}]")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if not 0.5 <= self.theta <= 1:
            raise ValueError(f"theta must be in [1/2, 1], got {self.theta}")
        if not self.lin_tol > 0:
            raise ValueError(f"lin_tol must be positive, got {self.lin_tol}")
        if not self.dt_max > 0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")
        if self.boundary_leak_tol < 0:
            raise ValueError(f"boundary_leak_tol must be >= 0, got {self.boundary_leak_tol}")
        if self.series_stride < 1:
            raise ValueError(f"series_stride must be >= 1, got {self.series_stride}")
        if self.solver not in ("auto", "cg", "banded"):
            raise ValueError(f"Unknown solver: {self.solver}")
        if self.solver == "banded" and sum(w > 0 for w in self.diffusion_weights) > 1:
            raise ValueError("banded solver needs diffusion along a single axis")
        for t in self.snapshot_times:
            if not self.t_start <= t <= self.t_end:
                raise ValueError(f"snapshot time {t} outside [{self.t_start}, {self.t_end}]")
        if self.initial_field is not None and self.initial_field.grid != self.grid:
            raise ValueError("initial_field lives on a different grid")

    @property
    def diffusion_weights(self) -> Tuple[float, ...]:
        return self.operator.axis_weights(self.grid.dim)

    def schedule(self) -> Tuple[float, ...]:
        """Output times strictly after t_start, ending with t_end."""
        times = sorted(set(t for t in self.snapshot_times if t > self.t_start) | {self.t_end})
        return tuple(t for t in times if t > self.t_start)

    def with_changes(self, **changes) -> "RunConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        """Config record (the explicit initial field is stored separately as a snapshot)."""
        return {
            "run_id": self.run_id,
            "grid": self.grid.to_dict(),
            "operator": self.operator.to_dict(),
            "flux": self.flux.to_dict(),
            "mass": self.mass,
            "initial": self.initial.to_dict(),
            "initial_explicit": self.initial_field is not None,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "cfl": self.cfl,
            "theta": self.theta,
            "lin_tol": self.lin_tol,
            "snapshot_times": list(self.snapshot_times),
            "boundary_leak_tol": self.boundary_leak_tol,
            "dt_max": self.dt_max,
            "max_iter": self.max_iter,
            "solver": self.solver,
            "record_steps": self.record_steps,
            "series_stride": self.series_stride,
            "tail_radii": list(self.tail_radii),
            "entropy_levels": list(self.entropy_levels),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], initial_field: Optional[Field] = None) -> "RunConfig":
        return cls(
            grid=Grid.from_dict(data["grid"]),
            operator=OperatorChoice(**data["operator"]),
            flux=FluxParams.from_dict(data["flux"]),
            mass=data["mass"],
            initial=InitialRecipe(**data["initial"]),
            t_start=data["t_start"],
            t_end=data["t_end"],
            cfl=data["cfl"],
            theta=data["theta"],
            lin_tol=data["lin_tol"],
            snapshot_times=tuple(data["snapshot_times"]),
            boundary_leak_tol=data["boundary_leak_tol"],
            dt_max=data["dt_max"],
            max_iter=data["max_iter"],
            solver=data["solver"],
            record_steps=data["record_steps"],
            series_stride=data["series_stride"],
            tail_radii=tuple(data["tail_radii"]),
            entropy_levels=tuple(data["entropy_levels"]),
            run_id=data["run_id"],
            initial_field=initial_field,
        )

    def config_hash(self) -> str:
        """sha256 of the canonical config record."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def same_discretization(a: RunConfig, b: RunConfig) -> bool:
    """True when two configs share grid, operator, flux, solver and schedule."""
    return (
        a.grid == b.grid
        and a.operator == b.operator
        and a.flux == b.flux
        and a.t_start == b.t_start
        and a.t_end == b.t_end
        and a.snapshot_times == b.snapshot_times
        and a.cfl == b.cfl
        and a.theta == b.theta
        and a.solver == b.solver
        and a.lin_tol == b.lin_tol
        and a.dt_max == b.dt_max
    )
