"""Path, chain and dual-process simulation."""

from mrca_dynamics.simulation.batch import simulate_batch, simulate_single_path
from mrca_dynamics.simulation.chains import (
    chain_invariant_check,
    invariant_quantiles,
    peak_stationary_sequence_check,
    simulate_jump_chain,
)
from mrca_dynamics.simulation.duality import (
    burn_in,
    dual_jumps,
    dual_path,
    dual_path_sweep,
    extract_records,
    oldest_residual,
    reversal_test,
    run_until_window_closed,
)
from mrca_dynamics.simulation.paths import (
    marginal,
    next_peak,
    next_trough,
    sample_stationary,
    simulate_path,
    simulate_stationary,
    to_log_scale,
)
from mrca_dynamics.simulation.rng import RngStream, make_rng

__all__ = [
    "RngStream",
    "make_rng",
    "next_peak",
    "next_trough",
    "simulate_path",
    "sample_stationary",
    "simulate_stationary",
    "marginal",
    "to_log_scale",
    "simulate_jump_chain",
    "invariant_quantiles",
    "chain_invariant_check",
    "peak_stationary_sequence_check",
    "extract_records",
    "dual_path",
    "dual_path_sweep",
    "oldest_residual",
    "dual_jumps",
    "run_until_window_closed",
    "burn_in",
    "reversal_test",
    "simulate_batch",
    "simulate_single_path",
]
