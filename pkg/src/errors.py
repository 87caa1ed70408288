"""
Exception hierarchy shared by the simulator, the diagnostics and the runner.
"""
from typing import Optional


class FastConvError(Exception):
    """Base class for all errors raised by fastconv."""


class NonFiniteFieldError(FastConvError, ValueError):
    """A Field was constructed from values containing NaN or Inf."""


class SimulationError(FastConvError, RuntimeError):
    """A run was aborted."""


class SolverConvergenceError(SimulationError):
    """The implicit linear solve did not reach lin_tol within its iteration budget."""


class BoundaryLeakError(SimulationError):
    """Boundary cells hold more mass than the configured tolerance allows."""

    def __init__(self, message: str, time: float, boundary_mass: float):
        super().__init__(message)
        self.time = time
        self.boundary_mass = boundary_mass


class ConfigError(FastConvError, ValueError):
    """Invalid experiment configuration, optionally pointing at a line of the config file."""

    def __init__(self, message: str, line: Optional[int] = None, key: Optional[str] = None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
