from mrca_dynamics.core.numerics import (
    DivergenceVerdict,
    QuadResult,
    detect_divergence,
    integrate,
    partial_integrals_near_zero,
    partial_integrals_to_infinity,
    safe_exp,
    solve_decreasing,
)

__all__ = [
    "QuadResult",
    "DivergenceVerdict",
    "safe_exp",
    "integrate",
    "solve_decreasing",
    "detect_divergence",
    "partial_integrals_near_zero",
    "partial_integrals_to_infinity",
]
