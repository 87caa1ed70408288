"""
Cross-run and single-run property checks with structured pass/fail records.
"""

from .records import CheckRecord, at_most, at_least, reported, worst_increase, is_strictly_decreasing, all_passed
from .pairs import (
    RunPair,
    contraction_series,
    contraction_check,
    mass_difference_series,
    mass_difference_check,
    comparison_check,
    comparison_record,
    primitive_sandwich,
)
from .estimates import (
    tail_amplitude,
    tail_report,
    constant_stability,
    energy_series,
    energy_integral,
    energy_inequality,
    energy_constant,
    energy_report_rows,
    shift_functional,
    shift_table,
    shift_check,
    marginal_error,
)
from .experiments import (
    ExperimentResult,
    sign_configs,
    sign_evaluate,
    uniqueness_configs,
    uniqueness_evaluate,
    large_time_configs,
    large_time_evaluate,
    dipole_perturbation,
    slab_initial,
    shifted_along_xN,
    sign_experiment,
    uniqueness_experiment,
    large_time_convergence,
    positive_part_restart,
)

__all__ = [
    # Records
    'CheckRecord',
    'at_most',
    'at_least',
    'reported',
    'worst_increase',
    'is_strictly_decreasing',
    'all_passed',

    # Pairs
    'RunPair',
    'contraction_series',
    'contraction_check',
    'mass_difference_series',
    'mass_difference_check',
    'comparison_check',
    'comparison_record',
    'primitive_sandwich',

    # Estimates
    'tail_amplitude',
    'tail_report',
    'constant_stability',
    'energy_series',
    'energy_integral',
    'energy_inequality',
    'energy_constant',
    'energy_report_rows',
    'shift_functional',
    'shift_table',
    'shift_check',
    'marginal_error',

    # Experiments
    'ExperimentResult',
    'sign_configs',
    'sign_evaluate',
    'uniqueness_configs',
    'uniqueness_evaluate',
    'large_time_configs',
    'large_time_evaluate',
    'dipole_perturbation',
    'slab_initial',
    'shifted_along_xN',
    'sign_experiment',
    'uniqueness_experiment',
    'large_time_convergence',
    'positive_part_restart',
]
