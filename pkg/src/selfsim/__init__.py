"""
Self-similar exponents, heat kernels, rescaling and decay fits.
"""

from .exponents import Exponents, exponents, diffusive_exponents
from .kernels import heat_kernel, heat_kernel_marginal
from .rescaling import axis_scales, support_box, scale_transform, rescale, profile_grid
from .fitting import (
    initial_time_scale,
    default_window,
    norm_samples,
    decay_fit,
    decay_fit_row,
    collapse_distance,
    moment_exponent_fit,
)

__all__ = [
    # Exponents
    'Exponents',
    'exponents',
    'diffusive_exponents',

    # Kernels
    'heat_kernel',
    'heat_kernel_marginal',

    # Rescaling
    'axis_scales',
    'support_box',
    'scale_transform',
    'rescale',
    'profile_grid',

    # Fits
    'initial_time_scale',
    'default_window',
    'norm_samples',
    'decay_fit',
    'decay_fit_row',
    'collapse_distance',
    'moment_exponent_fit',
]
