"""
Kruzhkov entropy audit of computed trajectories.
"""

from .bumps import TestBump, default_bumps, psi, psi_prime, psi_second
from .audit import (
    EntropyAudit,
    audit,
    cell_entropy_check,
    entropy_levels,
    kruzhkov_residual,
    time_reversed,
)

__all__ = [
    'TestBump',
    'default_bumps',
    'psi',
    'psi_prime',
    'psi_second',
    'EntropyAudit',
    'audit',
    'cell_entropy_check',
    'entropy_levels',
    'kruzhkov_residual',
    'time_reversed',
]
