from mrca_dynamics.acceptance.suites import (
    SUITE_ALIASES,
    SUITE_REGISTRY,
    builtin_measures,
    run_suite,
    run_suites,
)

__all__ = ["SUITE_ALIASES", "SUITE_REGISTRY", "builtin_measures", "run_suite", "run_suites"]
