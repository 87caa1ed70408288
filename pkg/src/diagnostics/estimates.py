"""
Single-run estimates: tail control, energy, shifts and the x' marginal.
"""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..grid import Field, integrate, lp_norm, marginal_xprime, shift_difference, tail_mass
from ..selfsim import heat_kernel_marginal, initial_time_scale
from ..stepper import Trajectory
from .records import CheckRecord, at_most, reported, worst_increase

logger = logging.getLogger(__name__)

ENERGY_SLACK = 1e-3


def tail_amplitude(mass_bound: float, q: float) -> float:
    """C(A) of the tail bound, taken as A^q (the flux scale of mass A)."""
    return mass_bound ** q


def tail_report(traj: Trajectory, radii: Sequence[float]) -> Tuple[pd.DataFrame, float]:
    """
    Measured tails against the tail-bound components.

    For each R and snapshot t > t_start: tail_mass(u(t), 2R) next to A t / R^2,
    C(A) t / R^{1 - N(q - 1)} and the initial tail at R, with A = sup_t ||u(t)||_1.

    Returns:
        Tuple of (table, fitted constant c = max measured / bound)
    """
    cfg = traj.config
    dim, q = traj.grid.dim, cfg.flux.q
    mass_bound = float(traj.series["l1"].max())
    c_a = tail_amplitude(mass_bound, q)
    power = 1.0 - dim * (q - 1.0)
    rows = []
    for radius in radii:
        if not radius > 0:
            raise ValueError(f"tail radius must be positive, got {radius}")
        initial_tail = tail_mass(traj.initial, radius)
        for t, f in zip(traj.times[1:], traj.fields[1:]):
            elapsed = t - cfg.t_start
            parabolic = mass_bound * elapsed / radius ** 2
            hyperbolic = c_a * elapsed / radius ** power
            bound = parabolic + hyperbolic + initial_tail
            measured = tail_mass(f, 2.0 * radius)
            rows.append({
                "R": radius,
                "t": t,
                "tail_2R": measured,
                "A_t_over_R2": parabolic,
                "CA_t_over_Rpow": hyperbolic,
                "initial_tail": initial_tail,
                "bound": bound,
                "ratio": measured / bound if bound > 0 else (0.0 if measured == 0 else math.inf),
            })
    table = pd.DataFrame(rows, columns=["R", "t", "tail_2R", "A_t_over_R2", "CA_t_over_Rpow",
                                        "initial_tail", "bound", "ratio"])
    fitted = float(table["ratio"].max()) if len(table) else 0.0
    return table, fitted


def constant_stability(name: str, reference: float, others: Sequence[float], factor: float = 2.0) -> CheckRecord:
    """Fitted constants stay within a factor of the reference (coarsest) value."""
    worst = 1.0
    for c in others:
        if reference > 0 and c > 0:
            worst = max(worst, c / reference, reference / c)
        elif c != reference:
            worst = math.inf
    return at_most(name, worst, factor, f"fitted constant stable within x{factor:g}",
                   reference=reference, others=list(others))


def energy_series(traj: Trajectory) -> pd.DataFrame:
    """
    Squared gradient norms per recorded time.

    Reduced operators report the x' gradient only; the full Laplacian adds the full gradient.
    """
    series = traj.series
    table = pd.DataFrame({
        "t": series["time"].to_numpy(dtype=float),
        "grad_xprime": series["grad_xprime"].to_numpy(dtype=float),
        "dirichlet_energy": series["dirichlet_energy"].to_numpy(dtype=float),
    })
    if traj.config.operator.kind == "full":
        table["grad_full"] = series["grad_full"].to_numpy(dtype=float)
    return table


def energy_integral(traj: Trajectory, tau: float) -> Tuple[float, float]:
    """
    Right-endpoint quadrature of int_tau^T <u, A u> dt and the bound (1/2)||u(tau)||_2^2.

    Raises:
        ValueError: If the series is not recorded at every step or tau is not a recorded time
    """
    series = traj.series
    steps = series["step"].to_numpy()
    if len(steps) > 1 and np.any(np.diff(steps) != 1):
        raise ValueError(f"energy integral of {traj.run_id} needs the series at every step (series_stride=1)")
    times = series["time"].to_numpy(dtype=float)
    matches = np.flatnonzero(np.isclose(times, tau, rtol=1e-12, atol=0.0))
    if not matches.size:
        raise ValueError(f"tau={tau} is not a recorded time of {traj.run_id}")
    start = int(matches[0])
    dts = series["dt"].to_numpy(dtype=float)[start + 1:]
    energy = series["dirichlet_energy"].to_numpy(dtype=float)[start + 1:]
    integral = math.fsum(dts * energy)
    bound = 0.5 * float(series["l2"].iloc[start]) ** 2
    return integral, bound


def energy_inequality(traj: Trajectory, tau: float, slack: float = ENERGY_SLACK) -> CheckRecord:
    """int_tau^T ||L^{1/2} u||^2 <= (1/2)||u(tau)||_2^2 (1 + slack)."""
    integral, bound = energy_integral(traj, tau)
    return at_most(
        f"energy_inequality[{traj.run_id}, tau={tau:g}]",
        integral,
        bound * (1.0 + slack),
        f"(1/2)||u(tau)||_2^2 (1 + {slack:g})",
    )


def energy_constant(traj: Trajectory, taus: Sequence[float]) -> pd.DataFrame:
    """Ratio of int_tau^T energy to tau^{-(N+1)/(2q)} M^{1/q} per tau (the implicit constant)."""
    dim, q = traj.grid.dim, traj.config.flux.q
    mass = abs(integrate(traj.initial))
    rows = []
    for tau in taus:
        integral, _ = energy_integral(traj, tau)
        scale = tau ** (-(dim + 1) / (2.0 * q)) * mass ** (1.0 / q)
        rows.append({"tau": tau, "integral": integral, "scale": scale,
                     "constant": integral / scale if scale > 0 else math.nan})
    return pd.DataFrame(rows, columns=["tau", "integral", "scale", "constant"])


def shift_functional(f: Field, xi_n: float) -> float:
    """int |u(x + (0, xi_N)) - u(x)| dx, with xi_N rounded to whole cells."""
    return shift_difference(f, int(round(xi_n / f.grid.dx_n)))


def shift_table(traj: Trajectory, t: float, shifts: Sequence[float]) -> pd.DataFrame:
    f = traj.field_at(t)
    rows = [{"t": t, "xi_N": xi, "shift_l1": shift_functional(f, xi)} for xi in sorted(shifts, key=abs)]
    return pd.DataFrame(rows, columns=["t", "xi_N", "shift_l1"])


def shift_check(table: pd.DataFrame, name: str) -> CheckRecord:
    """The shifted difference shrinks as |xi_N| -> 0 (monotone in |xi_N|, no rate)."""
    ordered = table.assign(abs_xi=table["xi_N"].abs()).sort_values("abs_xi")
    increase = worst_increase(ordered["shift_l1"].to_numpy()[::-1])
    return at_most(name, increase, 0.0, "monotone smallness in |xi_N|")


def marginal_error(traj: Trajectory, t0: Optional[float] = None) -> pd.DataFrame:
    """
    ||marginal_xprime(u(t)) - M Gamma_{N-1}(t + t0)||_1 per snapshot.

    In dim 1 this is |mass(t) - M|.
    """
    mass = integrate(traj.initial)
    t0 = initial_time_scale(traj.config) if t0 is None else t0
    rows = []
    for t, f in zip(traj.times, traj.fields):
        shifted = t - traj.config.t_start + t0
        marginal = marginal_xprime(f)
        if traj.grid.dim == 1:
            error = abs(marginal - mass)
        elif shifted <= 0:
            continue
        else:
            sub = marginal.grid
            exact = mass * heat_kernel_marginal(shifted, sub.mesh(), traj.grid.dim)
            error = lp_norm(marginal - Field(sub, np.broadcast_to(exact, sub.shape)), 1)
        rows.append({"t": t, "marginal_error": error})
    return pd.DataFrame(rows, columns=["t", "marginal_error"])


def energy_report_rows(traj: Trajectory) -> Sequence[CheckRecord]:
    """Report-only rows for the discrete L^2_loc gradient bound."""
    table = energy_series(traj)
    return [reported(f"gradient_sup[{traj.run_id}]", float(table["grad_xprime"].max()),
                     "discrete x' gradient norm, no threshold available")]
