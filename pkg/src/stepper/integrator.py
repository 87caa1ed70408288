"""
IMEX time integration.

Each step is a Lie splitting: an explicit monotone convection sub-step along
x_N followed by a theta-implicit diffusion sub-step. Several runs that share
a discretization can be advanced in lockstep with a common step size so that
cross-run comparisons see identical discrete evolution operators.
"""
import logging
import math
import time as wallclock
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from ..errors import BoundaryLeakError, NonFiniteFieldError, SimulationError
from ..flux import convection_divergence, lipschitz_bound
from ..grid import (
    Field,
    boundary_mass,
    gradient_energy,
    integrate,
    lp_norm,
    negative_part_mass,
    second_moment_xN,
    tail_mass,
)
from .balance import cell_entropy_production
from .config import RunConfig, same_discretization
from .diffusion import dirichlet_energy, implicit_diffusion
from .initial import make_initial
from .trajectory import SERIES_COLUMNS, Trajectory, tail_column

logger = logging.getLogger(__name__)

# relative slack of the CFL precondition
_TIME_SLACK = 1e-12


def stable_dt(f: Field, cfg: RunConfig) -> float:
    """Uncapped CFL step cfl * dx_N / L (inf when the flux slope bound is 0)."""
    lipschitz = lipschitz_bound(cfg.flux, f.max_abs)
    if lipschitz == 0:
        return math.inf
    return cfg.cfl * cfg.grid.dx_n / lipschitz


def cfl_dt(f: Field, cfg: RunConfig, t: Optional[float] = None, t_next: Optional[float] = None) -> float:
    """
    Step size for the next step.

    dt = min(cfl * dx_N / L, dt_max, t_next - t).

    Args:
        f: Current state
        cfg: Run configuration
        t: Current time (optional, for the output-time cap)
        t_next: Next output time (optional)

    Returns:
        The step size
    """
    dt = min(stable_dt(f, cfg), cfg.dt_max)
    if t is not None and t_next is not None:
        dt = min(dt, t_next - t)
    return dt


def step_imex(f: Field, dt: float, cfg: RunConfig) -> Field:
    """
    One Lie-split step: u* = f - dt * D_N f_eta(f), then implicit diffusion of u*.

    Raises:
        ValueError: If dt violates the CFL bound
        NonFiniteFieldError: If the step produces NaN/Inf
    """
    limit = stable_dt(f, cfg)
    if dt > limit * (1.0 + _TIME_SLACK):
        raise ValueError(f"dt={dt:.6g} exceeds the CFL step {limit:.6g}")
    convected = f
    if cfg.flux.enabled:
        convected = f - convection_divergence(f, cfg.flux) * dt
    return implicit_diffusion(convected, dt, cfg)


def series_row(f: Field, cfg: RunConfig, step: int, t: float, dt: float, entropy_min: float) -> Dict[str, Any]:
    """Scalar diagnostics of one recorded state."""
    dim = f.grid.dim
    row = {
        "step": step,
        "time": t,
        "dt": dt,
        "mass": integrate(f),
        "l1": lp_norm(f, 1),
        "l2": lp_norm(f, 2),
        "linf": lp_norm(f, math.inf),
        "min": f.min,
        "max": f.max,
        "negative_mass": negative_part_mass(f),
        "boundary_mass": boundary_mass(f),
        "entropy_min": entropy_min,
        "dirichlet_energy": dirichlet_energy(f, cfg),
        "grad_xprime": gradient_energy(f, range(dim - 1)),
        "grad_full": gradient_energy(f, range(dim)),
        "second_moment_xN": second_moment_xN(f),
    }
    for r in cfg.tail_radii:
        row[tail_column(r)] = tail_mass(f, r)
    return row


@dataclass
class _RunState:
    """Mutable integration state of one run."""
    cfg: RunConfig
    current: Field
    traj: Trajectory
    rows: List[Dict[str, Any]] = field(default_factory=list)
    ref_mass: float = 1.0
    nonnegative: bool = False
    warned_negative: bool = False

    @property
    def log_prefix(self) -> str:
        return f"[RUN] run_id={self.cfg.run_id}"


def _start_state(cfg: RunConfig) -> _RunState:
    u0 = cfg.initial_field if cfg.initial_field is not None else make_initial(cfg.initial, cfg.mass, cfg.grid)
    traj = Trajectory(config=cfg)
    traj.append(cfg.t_start, u0)
    state = _RunState(cfg=cfg, current=u0, traj=traj)
    state.ref_mass = lp_norm(u0, 1) or 1.0
    state.nonnegative = u0.min >= 0
    state.rows.append(series_row(u0, cfg, 0, cfg.t_start, 0.0, math.nan))
    return state


def _resume_state(traj: Trajectory, cfg: RunConfig) -> _RunState:
    state = _RunState(cfg=cfg, current=traj.final, traj=Trajectory(
        config=cfg, times=list(traj.times), fields=list(traj.fields),
        steps=traj.steps, wall_time=traj.wall_time,
    ))
    state.rows = traj.series.to_dict("records")
    state.ref_mass = lp_norm(traj.initial, 1) or 1.0
    state.nonnegative = traj.initial.min >= 0
    return state


def _advance(state: _RunState, dt: float, t_new: float, step: int, record: bool) -> None:
    cfg = state.cfg
    old = state.current
    try:
        new = step_imex(old, dt, cfg)
    except NonFiniteFieldError as e:
        logger.error(f"{state.log_prefix} | step={step} | t={t_new:.6g} | non-finite values")
        raise SimulationError(f"run {cfg.run_id}: non-finite values at step {step}, t={t_new:.6g}") from e

    leak = boundary_mass(new)
    if leak > cfg.boundary_leak_tol * state.ref_mass:
        logger.error(
            f"{state.log_prefix} | step={step} | t={t_new:.6g} | boundary mass {leak:.3e} "
            f"exceeds {cfg.boundary_leak_tol:g} x {state.ref_mass:.3g}"
        )
        raise BoundaryLeakError(
            f"run {cfg.run_id}: boundary cells hold {leak:.3e} of mass {state.ref_mass:.3g} at t={t_new:.6g}; "
            f"enlarge the domain",
            time=t_new,
            boundary_mass=leak,
        )

    if state.nonnegative and not state.warned_negative and new.min < -cfg.lin_tol * state.ref_mass:
        logger.warning(f"{state.log_prefix} | t={t_new:.6g} | min value {new.min:.3e} below -lin_tol")
        state.warned_negative = True

    if record:
        entropy_min = min(
            float(cell_entropy_production(old, new, dt, cfg, k).min()) for k in cfg.entropy_levels
        ) if cfg.entropy_levels else math.nan
        state.rows.append(series_row(new, cfg, step, t_new, dt, entropy_min))
        logger.debug(f"{state.log_prefix} | step={step} | t={t_new:.6g} | dt={dt:.3e} | max={new.max:.6g}")

    state.current = new
    if cfg.record_steps:
        state.traj.append(t_new, new)


def _integrate(states: Sequence[_RunState], t: float, step: int) -> None:
    """Advance every state through the shared output schedule."""
    cfg = states[0].cfg
    started = wallclock.perf_counter()
    for target in cfg.schedule():
        if target <= t:
            continue
        while t < target:
            dt = min(cfl_dt(s.current, s.cfg) for s in states)
            remaining = target - t
            if dt >= remaining:
                dt, t_new = remaining, target
            else:
                t_new = min(t + dt, target)
            step += 1
            record = step % cfg.series_stride == 0 or t_new == target
            for state in states:
                _advance(state, dt, t_new, step, record)
            t = t_new
        for state in states:
            if not cfg.record_steps:
                state.traj.append(t, state.current)
            logger.info(
                f"{state.log_prefix} | snapshot t={t:.6g} | step={step} | "
                f"mass={integrate(state.current):.12g} | max={state.current.max:.6g}"
            )
    elapsed = wallclock.perf_counter() - started
    for state in states:
        columns = list(SERIES_COLUMNS) + [tail_column(r) for r in state.cfg.tail_radii]
        state.traj.steps = step
        state.traj.wall_time += elapsed
        state.traj.series = pd.DataFrame(state.rows, columns=columns)


def run_lockstep(configs: Sequence[RunConfig]) -> List[Trajectory]:
    """
    Integrate several runs with a common step size.

    All configs must share grid, operator, flux, schedule and solver
    settings; they may differ in initial data and mass. The step is the
    minimum of their CFL steps.

    Returns:
        One Trajectory per config, in order
    """
    if not configs:
        return []
    first = configs[0]
    for other in configs[1:]:
        if not same_discretization(first, other):
            raise ValueError(f"run {other.run_id} does not share the discretization of {first.run_id}")
        if other.record_steps != first.record_steps or other.series_stride != first.series_stride:
            raise ValueError(f"run {other.run_id} records on a different stride than {first.run_id}")

    states = [_start_state(cfg) for cfg in configs]
    for state in states:
        logger.info(
            f"{state.log_prefix} | start | t=[{first.t_start:g}, {first.t_end:g}] | grid={first.grid.cells} | "
            f"q={first.flux.q:g} | eta={first.flux.eta:.3g} | operator={first.operator.kind}"
        )
    _integrate(states, first.t_start, 0)
    for state in states:
        logger.info(
            f"{state.log_prefix} | finished | steps={state.traj.steps} | wall={state.traj.wall_time:.2f}s | "
            f"mass drift={state.traj.mass_drift():.3e}"
        )
    return [s.traj for s in states]


def run(cfg: RunConfig) -> Trajectory:
    """
    Integrate one run from t_start to t_end.

    Raises:
        BoundaryLeakError: If the boundary cells collect more than boundary_leak_tol of the mass
        SolverConvergenceError: If an implicit solve fails
        SimulationError: If a step produces non-finite values
    """
    return run_lockstep([cfg])[0]


def continue_run(traj: Trajectory, cfg: RunConfig) -> Trajectory:
    """
    Continue a recorded run under cfg (same discretization, later t_end).

    The step counter, series and snapshots carry over, so continuing a run
    stopped at one of its output times reproduces the uninterrupted run.
    """
    if not same_discretization(traj.config.with_changes(t_end=cfg.t_end, snapshot_times=cfg.snapshot_times), cfg):
        raise ValueError("continuation must keep the discretization of the recorded run")
    if cfg.t_end < traj.t_final:
        raise ValueError(f"t_end={cfg.t_end} precedes the recorded end t={traj.t_final}")
    state = _resume_state(traj, cfg)
    logger.info(f"{state.log_prefix} | resume | t={traj.t_final:g} -> {cfg.t_end:g} | step={traj.steps}")
    _integrate([state], traj.t_final, traj.steps)
    return state.traj

