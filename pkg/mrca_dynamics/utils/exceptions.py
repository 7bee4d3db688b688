"""Custom exceptions for the MRCA-age toolkit."""


class MrcaError(Exception):
    """Base exception for all mrca_dynamics errors."""

    pass


class ConfigurationError(MrcaError):
    """Raised when there's a configuration problem."""

    pass


class DomainError(MrcaError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    pass


class NoStationaryLawError(MrcaError):
    """Raised when a stationary quantity is requested but the integrated tail diverges."""

    pass


class NumericalError(MrcaError):
    """Raised when a numerical routine fails to meet its contract."""

    pass


class QuadratureError(NumericalError):
    """Raised when adaptive quadrature does not converge within the subinterval limit."""

    def __init__(self, message: str, partial_value: float, error_estimate: float):
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate


class BracketNotFoundError(NumericalError):
    """Raised when bracket expansion for a monotone root exhausts its doublings."""

    pass


class RootResidualError(NumericalError):
    """Raised when a root leaves a residual above tolerance that floating point cannot explain."""

    def __init__(self, message: str, root: float, residual: float):
        super().__init__(message)
        self.root = root
        self.residual = residual


class NoSolutionError(NumericalError):
    """Raised when an inversion target lies beyond the range of the function."""

    pass


class WindowNotClosedError(MrcaError):
    """Raised when the record set may still be incomplete at the requested time."""

    pass


class IterationCapError(NumericalError):
    """Raised when a simulation loop exceeds its configured iteration cap."""

    pass


class DegenerateSampleError(MrcaError, ValueError):
    """Raised when a sample is too small or constant for a goodness-of-fit test."""

    pass


class InconclusiveDivergenceError(NumericalError):
    """Raised when the divergence heuristic cannot decide whether a tail integral is finite."""

    pass
