"""
Uniform structured grids, discrete fields and the functionals every diagnostic uses.
"""

from .mesh import Grid, Field
from .functionals import (
    integrate,
    lp_norm,
    tail_mass,
    negative_part_mass,
    boundary_mass,
    primitive_xN,
    marginal_xprime,
    second_moment_xN,
    sample_at,
    resample,
    gradient_energy,
    shift_difference,
)
from .snapshot import write_snapshot, read_snapshot

__all__ = [
    # Types
    'Grid',
    'Field',

    # Functionals
    'integrate',
    'lp_norm',
    'tail_mass',
    'negative_part_mass',
    'boundary_mass',
    'primitive_xN',
    'marginal_xprime',
    'second_moment_xN',
    'sample_at',
    'resample',
    'gradient_energy',
    'shift_difference',

    # Persistence
    'write_snapshot',
    'read_snapshot',
]
