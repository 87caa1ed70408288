"""
fastconv - finite-volume experiments for fast-convection diffusion equations
"""

__version__ = "0.1.0"
