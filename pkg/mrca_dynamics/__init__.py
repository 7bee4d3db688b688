"""
MRCA Dynamics - Age of the Most Recent Common Ancestor as a Markov process

Transition kernels, regime classification, exact path simulation, the time-reversal
dual and the stable branching identities behind the stationary MRCA-age process.
"""

from mrca_dynamics.__version__ import __version__
from mrca_dynamics.config.logging import configure_logging, get_logger
from mrca_dynamics.measures import build_measure, classify
from mrca_dynamics.models.params import parse_measure_spec
from mrca_dynamics.simulation import reversal_test, simulate_batch, simulate_path

__all__ = [
    "__version__",
    "build_measure",
    "parse_measure_spec",
    "classify",
    "simulate_path",
    "simulate_batch",
    "reversal_test",
    "configure_logging",
    "get_logger",
]
