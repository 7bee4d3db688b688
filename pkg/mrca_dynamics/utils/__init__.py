from mrca_dynamics.utils.exceptions import (
    BracketNotFoundError,
    ConfigurationError,
    DegenerateSampleError,
    DomainError,
    InconclusiveDivergenceError,
    IterationCapError,
    MrcaError,
    NoSolutionError,
    NoStationaryLawError,
    NumericalError,
    QuadratureError,
    RootResidualError,
    WindowNotClosedError,
)
from mrca_dynamics.utils.output import write_csv, write_json

__all__ = [
    "MrcaError",
    "ConfigurationError",
    "DomainError",
    "NoStationaryLawError",
    "NumericalError",
    "QuadratureError",
    "BracketNotFoundError",
    "NoSolutionError",
    "RootResidualError",
    "IterationCapError",
    "InconclusiveDivergenceError",
    "WindowNotClosedError",
    "DegenerateSampleError",
    "write_csv",
    "write_json",
]
