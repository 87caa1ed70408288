"""
Implicit diffusion sub-step for the operator L with zero-Neumann closure.

A is the standard second-order stencil of L: for every diffusing axis with
weight w the 3-point operator -w (u_{i+1} - 2u_i + u_{i-1}) / h^2, with the
missing neighbour replaced by u_i at the box faces. A is symmetric positive
semi-definite with zero row sums, so I + theta dt A is an M-matrix and the
solve conserves mass.
"""
import logging
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.sparse.linalg import cg

from ..errors import SolverConvergenceError
from ..grid import Field, Grid
from .config import RunConfig

logger = logging.getLogger(__name__)


def _neumann_1d(n: int) -> sp.csr_matrix:
    """1D Neumann stencil (unscaled): tridiag(-1, 2, -1) with 1 in the corners."""
    main = np.full(n, 2.0)
    main[0] = main[-1] = 1.0
    off = -np.ones(n - 1)
    return sp.diags([off, main, off], [-1, 0, 1], format="csr")


@lru_cache(maxsize=32)
def operator_matrix(grid: Grid, weights: Tuple[float, ...]) -> sp.csr_matrix:
    """
    Assemble A for the given per-axis diffusion weights.

    Args:
        grid: Grid (axes in storage order, x_N last)
        weights: Diffusion coefficient per axis

    Returns:
        Sparse size x size matrix acting on row-major flattened values
    """
    total = sp.csr_matrix((grid.size, grid.size))
    for axis, w in enumerate(weights):
        if w == 0:
            continue
        factors = [sp.identity(n, format="csr") for n in grid.cells]
        factors[axis] = _neumann_1d(grid.cells[axis]) * (w / grid.spacing[axis] ** 2)
        term = factors[0]
        for other in factors[1:]:
            term = sp.kron(term, other, format="csr")
        total = total + term
    return total.tocsr()


def apply_operator(values: np.ndarray, grid: Grid, weights: Sequence[float]) -> np.ndarray:
    """A u evaluated by the stencil (face differences with zero boundary faces)."""
    out = np.zeros_like(values)
    for axis, w in enumerate(weights):
        if w == 0:
            continue
        h = grid.spacing[axis]
        faces = np.diff(values, axis=axis) / h
        pad = [(0, 0)] * values.ndim
        pad[axis] = (1, 1)
        faces = np.pad(faces, pad)
        out -= w * np.diff(faces, axis=axis) / h
    return out


def dirichlet_energy(f: Field, cfg: RunConfig) -> float:
    """
    <u, A u> in discrete form: weighted squared face differences times the cell volume.

    This is the discrete ||L^{1/2} u||_2^2 of the run's operator.
    """
    total = 0.0
    for axis, w in enumerate(cfg.diffusion_weights):
        if w == 0:
            continue
        d = np.diff(f.values, axis=axis) / f.grid.spacing[axis]
        total += w * float(np.sum(d * d))
    return total * f.grid.cell_volume


def solver_kind(cfg: RunConfig) -> str:
    """Resolve solver='auto': banded when exactly one axis diffuses."""
    if cfg.solver != "auto":
        return cfg.solver
    active = sum(w > 0 for w in cfg.diffusion_weights)
    return "banded" if active == 1 else "cg"


def _solve_banded_axis(rhs: np.ndarray, grid: Grid, axis: int, coef: float) -> np.ndarray:
    """Solve (I + coef * N_axis / h^2) v = rhs independently on every line along axis."""
    n = grid.cells[axis]
    alpha = coef / grid.spacing[axis] ** 2
    ab = np.zeros((3, n))
    ab[0, 1:] = -alpha
    ab[1, :] = 1.0 + 2.0 * alpha
    ab[1, 0] = ab[1, -1] = 1.0 + alpha
    ab[2, :-1] = -alpha
    lines = np.moveaxis(rhs, axis, 0)
    shape = lines.shape
    solved = solve_banded((1, 1), ab, lines.reshape(n, -1), check_finite=False)
    return np.moveaxis(solved.reshape(shape), 0, axis)


def _solve_cg(rhs: np.ndarray, guess: np.ndarray, grid: Grid, weights: Tuple[float, ...],
              coef: float, cfg: RunConfig) -> np.ndarray:
    system = sp.identity(grid.size, format="csr") + coef * operator_matrix(grid, weights)
    jacobi = sp.diags(1.0 / system.diagonal())
    b = rhs.ravel()
    solution, info = cg(system, b, x0=guess.ravel(), rtol=cfg.lin_tol, atol=0.0,
                        maxiter=cfg.max_iter, M=jacobi)
    if info != 0:
        residual = float(np.linalg.norm(b - system @ solution))
        raise SolverConvergenceError(
            f"CG did not reach lin_tol={cfg.lin_tol:g} in {cfg.max_iter} iterations "
            f"(residual {residual:.3e}, |b| {np.linalg.norm(b):.3e})"
        )
    return solution.reshape(grid.shape)


def implicit_diffusion(f: Field, dt: float, cfg: RunConfig) -> Field:
    """
    One theta-scheme diffusion step.

    Solves (I + theta dt A) v = (I - (1 - theta) dt A) f.

    Args:
        f: Field after the convection sub-step
        dt: Step size (> 0)
        cfg: Run configuration (operator, theta, solver, lin_tol, max_iter)

    Returns:
        The diffused field

    Raises:
        SolverConvergenceError: If CG exhausts max_iter
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    weights = cfg.diffusion_weights
    if not any(w > 0 for w in weights):
        return f

    rhs = f.values
    if cfg.theta < 1.0:
        rhs = rhs - (1.0 - cfg.theta) * dt * apply_operator(f.values, f.grid, weights)
    coef = cfg.theta * dt

    if solver_kind(cfg) == "banded":
        values = rhs
        for axis, w in enumerate(weights):
            if w > 0:
                values = _solve_banded_axis(values, f.grid, axis, coef * w)
    else:
        values = _solve_cg(rhs, f.values, f.grid, weights, coef, cfg)
    return Field(f.grid, values)
