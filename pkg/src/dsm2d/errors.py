"""Exception types shared across the package.

The split mirrors the CLI exit-code contract: configuration / input-format
problems (exit 2) versus numerical solver failures (exit 3).
"""


class Dsm2dError(Exception):
    """Base class for all package errors."""


class ConfigError(Dsm2dError):
    """Invalid configuration, CLI usage, or file format (exit code 2)."""


class SolverError(Dsm2dError):
    """Numerical solver failure (exit code 3)."""


class DomainError(ConfigError):
    """Argument outside the documented domain of a special function."""


class CoincidenceError(DomainError):
    """Source and evaluation point coincide at a kernel singularity."""


class DegeneratePairError(ConfigError):
    """Observation direction equals incident direction (x_hat == theta)."""


class MissingMirrorError(ConfigError):
    """The mirrored pair (-x_hat, -theta) is not available in the data."""


class ResolutionError(SolverError):
    """Discretisation too coarse for the requested wavenumber."""


class ConvergenceError(SolverError):
    """Iterative solve did not reach the requested residual."""


class UnresolvedOscillationError(SolverError):
    """Quadrature cell too coarse for the oscillation after max refinement."""
