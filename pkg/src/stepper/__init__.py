"""
IMEX time integration of the fast-convection diffusion equation.
"""

from .config import OperatorChoice, InitialRecipe, RunConfig, same_discretization
from .initial import make_initial
from .diffusion import operator_matrix, apply_operator, implicit_diffusion, dirichlet_energy, solver_kind
from .balance import cell_entropy_production
from .trajectory import Trajectory, SERIES_COLUMNS, tail_column
from .integrator import cfl_dt, stable_dt, step_imex, run, run_lockstep, continue_run, series_row
from .checkpoint import save_trajectory, load_trajectory, load_config, resume

__all__ = [
    # Configuration
    'OperatorChoice',
    'InitialRecipe',
    'RunConfig',
    'same_discretization',

    # Operators
    'make_initial',
    'operator_matrix',
    'apply_operator',
    'implicit_diffusion',
    'dirichlet_energy',
    'solver_kind',
    'cell_entropy_production',

    # Integration
    'Trajectory',
    'SERIES_COLUMNS',
    'tail_column',
    'cfl_dt',
    'stable_dt',
    'step_imex',
    'run',
    'run_lockstep',
    'continue_run',
    'series_row',

    # Persistence
    'save_trajectory',
    'load_trajectory',
    'load_config',
    'resume',
]
