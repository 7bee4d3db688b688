"""
Acceptance suites: closed-form reproduction and Monte Carlo versus formula checks.

Each suite takes a master seed and a size factor. Sample sizes are multiplied by the
size factor and Monte Carlo tolerances widen as 1/sqrt(size_factor) below 1, so a
reduced run keeps its error rate. Deterministic tolerances are multiplied by the
configured tolerance_scale.
"""

import math
import time
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from mrca_dynamics.branching import (
    additivity_residual,
    lemma51_check,
    sample_Z_from_zero,
    semigroup_residual,
)
from mrca_dynamics.config.logging import get_logger
from mrca_dynamics.config.settings import get_settings
from mrca_dynamics.kernels import (
    composed_transition_density,
    composed_zero_mass,
    detailed_balance_residual,
    exact_tv,
    jump_intensity,
    jump_rate,
    jump_target_density,
    logscale_stationary_density,
    logscale_tail,
    mass_balance_residual,
    prob_at_zero,
    sample_transition,
    stable_beta_limit_cdf,
    stable_beta_limit_density,
    stable_beta_limit_mean,
    stable_jump_rate,
    stable_jump_target_density,
    stable_transition_atom,
    stable_transition_density,
    stationary_cdf,
    stationary_density,
    stationary_quantile,
    transition_atom,
    transition_density,
    tv_bound,
)
from mrca_dynamics.measures import (
    HyperbolicMeasure,
    LifetimeMeasure,
    LogStableMeasure,
    ParetoMeasure,
    StableMeasure,
    classify,
)
from mrca_dynamics.models.results import ComparisonResult, SuiteResult
from mrca_dynamics.simulation import (
    RngStream,
    chain_invariant_check,
    peak_stationary_sequence_check,
    reversal_test,
    simulate_jump_chain,
    simulate_path,
    simulate_stationary,
)
from mrca_dynamics.stats import (
    batch_dispersion,
    binned_tv,
    empirical_laplace,
    ks_comparison,
    poisson_rate_ci,
)
from mrca_dynamics.utils.exceptions import ConfigurationError

logger = get_logger(__name__)

Checks = List[Dict[str, Any]]
SuiteRunner = Callable[[int, float], tuple[Checks, str]]


def _check(name: str, passed: bool, **details: Any) -> Dict[str, Any]:
    return {"check": name, "passed": bool(passed), **details}


def _comparison(result: ComparisonResult) -> Dict[str, Any]:
    return {"check": result.comparison, **result.to_dict()}


def _size(base: int, size_factor: float, minimum: int = 100) -> int:
    return max(minimum, int(round(base * size_factor)))


def _mc_widening(size_factor: float) -> float:
    return 1.0 / math.sqrt(min(1.0, size_factor))


def _rng(seed: int, stream: int) -> np.random.Generator:
    return RngStream(seed, stream).generator()


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def builtin_measures() -> List[LifetimeMeasure]:
    """One measure per built-in regime, plus a Pareto tail whose process reaches 0."""
    return [
        StableMeasure(beta=0.5),
        StableMeasure(beta=1.0),
        HyperbolicMeasure(alpha=0.5),
        HyperbolicMeasure(alpha=1.0),
        HyperbolicMeasure(alpha=2.0),
        ParetoMeasure(a=1.0, p=2.0),
        ParetoMeasure(a=1.0, p=0.5),
        LogStableMeasure(beta=0.5),
    ]


def stable_atom_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Empirical P{A_1 = 2} from x = 1 against the atom x/(x+t) = 1/2."""
    n = _size(100_000, size_factor)
    tolerance = 0.006 * _mc_widening(size_factor)
    expected = stable_transition_atom(1.0, 1.0)
    checks = []
    for stream, beta in enumerate((0.5, 1.0)):
        meas = StableMeasure(beta=beta)
        rng = _rng(seed, stream)
        hits = sum(1 for _ in range(n) if sample_transition(meas, 1.0, 1.0, rng) == 2.0)
        frequency = hits / n
        checks.append(
            _check(
                f"atom_beta_{beta:g}",
                abs(frequency - expected) <= tolerance,
                frequency=frequency,
                expected=expected,
                tolerance=tolerance,
                n=n,
            )
        )
    return checks, f"{n} one-step draws per beta"


def beta_limit_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Stable{1} from 0: A_1 follows Beta(2, 1), both along paths and for the kernel."""
    meas = StableMeasure(beta=1.0)

    def cdf(u: float) -> float:
        return stable_beta_limit_cdf(1.0, min(max(u, 0.0), 1.0))

    n_paths = _size(100_000, size_factor)
    rng = _rng(seed, 0)
    path_values = np.array(
        [simulate_path(meas, 0.0, 1.0, rng).value_at(1.0) for _ in range(n_paths)]
    )
    rng = _rng(seed, 1)
    kernel_values = np.array([sample_transition(meas, 0.0, 1.0, rng) for _ in range(n_paths)])

    mean = float(path_values.mean())
    se = float(path_values.std(ddof=1) / math.sqrt(n_paths))
    expected_mean = stable_beta_limit_mean(1.0)
    checks = [
        _comparison(ks_comparison("path_marginal", path_values, cdf)),
        _comparison(ks_comparison("kernel_marginal", kernel_values, cdf)),
        _check(
            "path_mean",
            abs(mean - expected_mean) <= 4.0 * se,
            estimate=mean,
            standard_error=se,
            expected=expected_mean,
        ),
    ]
    return checks, f"{n_paths} paths on [0, 1] from x0 = 0"


def mass_balance_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """atom + continuous mass + mass at 0 = 1 on the (measure, x, t) grid."""
    tolerance = 1e-8 * get_settings().tolerance_scale
    checks = []
    for meas in builtin_measures():
        worst, where = 0.0, (0.0, 0.0)
        for x in (0.0, 0.5, 1.0, 2.0):
            for t in (0.1, 1.0, 5.0):
                residual = mass_balance_residual(meas, x, t)
                if residual > worst:
                    worst, where = residual, (x, t)
        checks.append(
            _check(
                f"mass_balance_{meas.name}",
                worst <= tolerance,
                max_residual=worst,
                at_x=where[0],
                at_t=where[1],
                tolerance=tolerance,
            )
        )
    return checks, "x in {0, 0.5, 1, 2}, t in {0.1, 1, 5}"


def chapman_kolmogorov_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Composition of the 0.5-step kernels from x = 1 equals the 1-step kernel."""
    meas = HyperbolicMeasure(alpha=2.0)
    x, s, t = 1.0, 0.5, 0.5
    tolerance = 1e-6 * get_settings().tolerance_scale
    ys = np.linspace(0.01, 1.99, 100)
    gaps = [
        abs(composed_transition_density(meas, x, s, t, y) - transition_density(meas, x, s + t, y))
        for y in ys
    ]
    worst = float(max(gaps))
    atom_gap = abs(
        transition_atom(meas, x, s) * transition_atom(meas, x + s, t)
        - transition_atom(meas, x, s + t)
    )
    zero_gap = abs(composed_zero_mass(meas, x, s, t) - prob_at_zero(meas, x, s + t))
    checks = [
        _check("density_sup_norm", worst <= tolerance, value=worst, tolerance=tolerance),
        _check("atom", atom_gap <= tolerance, value=atom_gap, tolerance=tolerance),
        _check("zero_mass", zero_gap <= tolerance, value=zero_gap, tolerance=tolerance),
    ]
    return checks, f"{meas.name}, x={x}, s={s}, t={t}, {len(ys)} grid points"


CLASSIFICATION_TABLE: Dict[str, Dict[str, str]] = {
    "hyperbolic(alpha=0.5)": {
        "returns_to_zero": "yes",
        "point_recurrent": "yes",
        "has_stationary": "yes",
        "jump_chain": "transient",
    },
    "hyperbolic(alpha=1)": {
        "returns_to_zero": "no",
        "point_recurrent": "yes",
        "has_stationary": "yes",
        "jump_chain": "null_recurrent",
    },
    "hyperbolic(alpha=2)": {
        "returns_to_zero": "no",
        "point_recurrent": "yes",
        "has_stationary": "yes",
        "jump_chain": "positive_recurrent",
    },
}
STABLE_VERDICTS = {
    "returns_to_zero": "no",
    "point_recurrent": "no",
    "has_stationary": "no",
    "jump_chain": "transient",
}


def classification_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """classify reproduces the hyperbolic and stable regime tables exactly."""
    cases: list[tuple[LifetimeMeasure, Dict[str, str]]] = [
        (HyperbolicMeasure(alpha=alpha), CLASSIFICATION_TABLE[f"hyperbolic(alpha={alpha:g})"])
        for alpha in (0.5, 1.0, 2.0)
    ]
    cases += [(StableMeasure(beta=beta), STABLE_VERDICTS) for beta in (0.25, 0.5, 1.0)]
    checks = []
    for meas, expected in cases:
        report = classify(meas)
        observed = {key: getattr(report, key) for key in expected}
        checks.append(
            _check(
                f"classify_{meas.name}", observed == expected, observed=observed, expected=expected
            )
        )
    return checks, "exact verdict match"


def stationarity_tv_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Pareto{1,2}: stationary marginals follow pi; binned TV respects the coupling bound."""
    meas = ParetoMeasure(a=1.0, p=2.0)
    n = _size(10_000, size_factor)
    rng = _rng(seed, 0)
    marginals = np.array([simulate_stationary(meas, 1.0, rng).value_at(1.0) for _ in range(n)])
    marginal_check = ks_comparison(
        "stationary_marginal", marginals, lambda x: stationary_cdf(meas, x) if x > 0 else 0.0
    )

    n_tv = _size(100_000, size_factor)
    rng = _rng(seed, 1)
    draws = np.array([sample_transition(meas, 1.0, 1.0, rng) for _ in range(n_tv)])
    binned = binned_tv(
        draws,
        lambda x: stationary_density(meas, x),
        bins=50,
        quantile=lambda u: stationary_quantile(meas, u),
    )
    bound = tv_bound(meas, 1.0, 1.0)
    exact = exact_tv(meas, 1.0, 1.0)
    expected_bound = 1.0 - math.exp(-0.5) * 0.75
    bounds = [tv_bound(meas, 1.0, t) for t in (0.1, 0.5, 1.0, 2.0, 5.0, 20.0)]
    tolerance = 1e-9 * get_settings().tolerance_scale

    checks = [
        _comparison(marginal_check),
        _check(
            "binned_tv_below_bound",
            binned.estimate <= bound + 3.0 * binned.mc_error,
            estimate=binned.estimate,
            mc_error=binned.mc_error,
            bound=bound,
            bins=binned.bins,
        ),
        _check("exact_tv_below_bound", exact <= bound + tolerance, exact_tv=exact, bound=bound),
        _check(
            "bound_closed_form",
            _close(bound, expected_bound, 1e-12),
            value=bound,
            expected=expected_bound,
        ),
        _check(
            "bound_nonincreasing",
            all(b >= a for a, b in zip(bounds[1:], bounds)),
            values=bounds,
        ),
    ]
    return checks, f"{n} stationary marginals, {n_tv} kernel draws from x=1, t=1"


def jump_intensity_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Pareto{1,2}: jumps per unit time fall in the 99% rate interval around rho."""
    meas = ParetoMeasure(a=1.0, p=2.0)
    rho = jump_intensity(meas)
    n_batches = 20
    batch_length = max(1_000.0, 10_000.0 * size_factor) / n_batches
    counts = [
        simulate_stationary(meas, batch_length, _rng(seed, b)).resolved_jump_count()
        for b in range(n_batches)
    ]
    exposures = [batch_length] * n_batches
    dispersion = batch_dispersion(counts, exposures)
    interval = poisson_rate_ci(sum(counts), sum(exposures), 0.99, dispersion)
    checks = [
        _check(
            "rate_interval_contains_rho",
            interval.contains(rho),
            rate=interval.rate,
            lower=interval.lower,
            upper=interval.upper,
            dispersion=interval.dispersion,
            rho=rho,
        ),
        _check("rho_closed_form", _close(rho, 2.0, 1e-8), value=rho, expected=2.0),
    ]
    return checks, f"exposure {sum(exposures):g} in {n_batches} stationary batches"


def duality_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Reversal test for Pareto{1,2} passes; the oldest-family negative control fails."""
    meas = ParetoMeasure(a=1.0, p=2.0)
    n_paths = _size(100, size_factor, minimum=4)
    report = reversal_test(meas, None, n_paths, _rng(seed, 0))
    control = reversal_test(meas, None, n_paths, _rng(seed, 1), negative_control=True)

    checks = [_comparison(c) for c in report.comparisons]
    checks += [{"check": m["name"], **m} for m in report.moments]
    control_marginal = next(c for c in control.comparisons if c.comparison == "marginal")
    checks.append(
        _check(
            "negative_control_rejected",
            not control_marginal.passed,
            statistic=control_marginal.statistic,
            p_value=control_marginal.p_value,
            n=control_marginal.n,
        )
    )
    return checks, f"{n_paths} paths per report; {report.note}"


def jump_chain_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Hyperbolic{2}: chain histograms match p and q, path peaks match p, detailed balance."""
    meas = HyperbolicMeasure(alpha=2.0)
    n = _size(100_000, size_factor, minimum=5_000)
    chain = simulate_jump_chain(meas, "peak", 1.0, n, _rng(seed, 0))
    peaks = chain.peaks[1000::10]
    troughs = chain.troughs[1000::10]

    tolerance = 1e-8 * get_settings().tolerance_scale
    grid = (0.25, 0.5, 1.0, 2.0, 3.0)
    worst = max(
        detailed_balance_residual(meas, kind, x, z)
        for kind in ("peak", "trough")
        for x in grid
        for z in grid
        if x != z
    )
    checks = [
        _comparison(chain_invariant_check(meas, "peak", peaks, name="peak_histogram")),
        _comparison(chain_invariant_check(meas, "trough", troughs, name="trough_histogram")),
        _check("detailed_balance", worst <= tolerance, max_residual=worst, tolerance=tolerance),
    ]
    horizon = float(_size(20_000, size_factor, minimum=5_000))
    checks.append(_comparison(peak_stationary_sequence_check(meas, horizon, _rng(seed, 1))))
    return checks, f"{n} chain steps, burn-in 1000, thinned by 10; path peaks over {horizon:g}"


def delta_family_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Semigroup and additivity identities, plus exact samplers started at 0."""
    grid5 = (0.1, 0.5, 1.0, 2.0, 5.0)
    semigroup = max(
        semigroup_residual(x, s, t, theta, delta, beta)
        for beta, delta in ((0.5, 3.0), (1.0, 2.0))
        for s in grid5
        for t in grid5
        for theta in grid5
        for x in (0.0, 0.5, 2.0)
    )
    additivity = max(
        additivity_residual(x1, x2, d1, d2, t, theta, beta)
        for beta in (0.5, 1.0)
        for x1, x2 in ((0.0, 1.0), (0.5, 2.0))
        for d1, d2 in ((0.0, 1.5), (1.0, 2.0))
        for t in (0.5, 2.0)
        for theta in (0.5, 2.0)
    )

    n = _size(100_000, size_factor)
    thetas = (0.25, 0.5, 1.0, 2.0, 4.0)
    draws = sample_Z_from_zero(1.0, 0.5, 3.0, _rng(seed, 0), size=n)
    estimates, errors = empirical_laplace(draws, thetas)
    targets = [(math.sqrt(theta) + 1.0) ** -3 for theta in thetas]
    laplace_ok = all(abs(e - g) <= 4.0 * se for e, g, se in zip(estimates, targets, errors))

    t = 1.5
    feller = sample_Z_from_zero(t, 1.0, 2.0, _rng(seed, 1), size=n) / t
    scale = get_settings().tolerance_scale
    checks = [
        _check("semigroup", semigroup <= 1e-12 * scale, max_residual=semigroup),
        _check("additivity", additivity <= 1e-14 * scale, max_residual=additivity),
        _check(
            "laplace_from_zero",
            laplace_ok,
            thetas=list(thetas),
            estimates=estimates.tolist(),
            standard_errors=errors.tolist(),
            expected=targets,
        ),
        _comparison(ks_comparison("gamma_limit", feller, stats.gamma(2.0).cdf)),
    ]
    return checks, f"{n} draws per sampler check"


def lemma51_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """The Levy-measure construction reproduces the stable lifetime tail."""
    tolerance = 1e-6 * get_settings().tolerance_scale
    checks = []
    for beta in (0.3, 0.5, 0.7, 0.9):
        for t in (0.5, 1.0, 2.0):
            error = lemma51_check(beta, t)
            checks.append(
                _check(f"beta_{beta:g}_t_{t:g}", error <= tolerance, relative_error=error)
            )
    return checks, "relative error against (1+beta)/(beta t)"


def _max_relative_gap(pairs: Sequence[tuple[float, float]]) -> float:
    return max(abs(a - b) / max(1.0, abs(b)) for a, b in pairs)


def stable_consistency_suite(seed: int, size_factor: float = 1.0) -> tuple[Checks, str]:
    """Generic formulas evaluated on Stable{beta} agree with the stable closed forms."""
    tolerance = 1e-10 * get_settings().tolerance_scale
    checks = []
    for beta in (0.25, 0.5, 1.0):
        meas = StableMeasure(beta=beta)
        density_pairs, atom_pairs, rate_pairs, target_pairs, limit_pairs = [], [], [], [], []
        for x in (0.5, 1.0, 2.0):
            rate_pairs.append((jump_rate(meas, x), stable_jump_rate(x)))
            for t in (0.1, 1.0, 5.0):
                atom_pairs.append((transition_atom(meas, x, t), stable_transition_atom(x, t)))
                for frac in (0.1, 0.5, 0.9):
                    y = frac * (x + t)
                    density_pairs.append(
                        (
                            transition_density(meas, x, t, y),
                            stable_transition_density(beta, x, t, y),
                        )
                    )
            for frac in (0.1, 0.5, 0.9):
                target_pairs.append(
                    (
                        jump_target_density(meas, x, frac * x),
                        stable_jump_target_density(beta, x, frac * x),
                    )
                )
        for t in (0.5, 1.0, 2.0):
            for u in (0.1, 0.5, 0.9):
                limit_pairs.append(
                    (
                        t * transition_density(meas, 0.0, t, u * t),
                        stable_beta_limit_density(beta, u),
                    )
                )
        tail_pairs = [(meas.tail(t), (1.0 + beta) / (beta * t)) for t in (0.5, 1.0, 2.0)]
        for label, pairs in (
            ("transition_density", density_pairs),
            ("transition_atom", atom_pairs),
            ("jump_rate", rate_pairs),
            ("jump_target_density", target_pairs),
            ("beta_limit_density", limit_pairs),
            ("tail", tail_pairs),
        ):
            gap = _max_relative_gap(pairs)
            checks.append(_check(f"{label}_beta_{beta:g}", gap <= tolerance, max_gap=gap))

    two_over_t = _max_relative_gap(
        [(StableMeasure(beta=1.0).tail(t), 2.0 / t) for t in (0.5, 1.0, 2.0)]
    )
    checks.append(_check("tail_beta_1_is_2_over_t", two_over_t <= tolerance, max_gap=two_over_t))

    for beta in (0.5, 1.0):
        logstable = LogStableMeasure(beta=beta)
        pairs = [(logstable.tail(y), logscale_tail(beta, y)) for y in (0.1, 1.0, 3.0)]
        pairs += [
            (stationary_density(logstable, y), logscale_stationary_density(beta, y))
            for y in (0.1, 1.0, 3.0)
        ]
        gap = _max_relative_gap(pairs)
        checks.append(_check(f"logscale_beta_{beta:g}", gap <= tolerance, max_gap=gap))
    return checks, "relative gaps over the x, t, y grids"


# Suite registry mapping acceptance suite names to runners
SUITE_REGISTRY: Dict[str, SuiteRunner] = {
    "stable-atom": stable_atom_suite,
    "beta-limit": beta_limit_suite,
    "mass-balance": mass_balance_suite,
    "chapman-kolmogorov": chapman_kolmogorov_suite,
    "classification": classification_suite,
    "stationarity-tv": stationarity_tv_suite,
    "jump-intensity": jump_intensity_suite,
    "duality": duality_suite,
    "jump-chain": jump_chain_suite,
    "delta-family": delta_family_suite,
    "lemma51": lemma51_suite,
    "stable-consistency": stable_consistency_suite,
}

# Alternate names accepted by run_suite
SUITE_ALIASES: Dict[str, str] = {"levy-lifetime": "lemma51"}


def run_suite(name: str, seed: Optional[int] = None, size_factor: float = 1.0) -> SuiteResult:
    """
    Run one acceptance suite.

    Args:
        name: Key of SUITE_REGISTRY or SUITE_ALIASES.
        seed: Master seed, defaults to the configured default_seed.
        size_factor: Multiplier on every Monte Carlo sample size.

    Returns:
        SuiteResult with per-check details and the elapsed time.

    Raises:
        ConfigurationError: If the suite name is unknown.
    """
    name = SUITE_ALIASES.get(name, name)
    if name not in SUITE_REGISTRY:
        raise ConfigurationError(
            f"Unknown suite {name!r}. Choose from {sorted(SUITE_REGISTRY)} or 'all'"
        )
    if not size_factor > 0:
        raise ConfigurationError(f"size_factor must be positive, got {size_factor}")
    settings = get_settings()
    seed = settings.default_seed if seed is None else seed

    logger.info(f"Running acceptance suite {name} (seed={seed}, size_factor={size_factor:g})")
    start = time.perf_counter()
    checks, note = SUITE_REGISTRY[name](seed, size_factor)
    elapsed = time.perf_counter() - start

    n_statistical = sum(1 for c in checks if "p_value" in c)
    if n_statistical:
        family = n_statistical * settings.significance
        note += (
            f"; {n_statistical} statistical comparisons at {settings.significance:g} each "
            f"(Bonferroni family level {family:g})"
        )
    passed = all(c["passed"] for c in checks)
    failed = [c["check"] for c in checks if not c["passed"]]
    if passed:
        logger.info(f"Suite {name} passed {len(checks)} checks in {elapsed:.1f}s")
    else:
        logger.warning(f"Suite {name} failed checks {failed} in {elapsed:.1f}s")
    return SuiteResult(name, passed, checks, settings.significance, note, elapsed)


def run_suites(
    names: Sequence[str], seed: Optional[int] = None, size_factor: float = 1.0
) -> List[SuiteResult]:
    """Run several suites in order; the single name "all" expands to every suite."""
    if list(names) == ["all"]:
        names = list(SUITE_REGISTRY)
    results = [run_suite(name, seed=seed, size_factor=size_factor) for name in names]
    passed = sum(1 for r in results if r.passed)
    logger.info(f"Acceptance complete: {passed} of {len(results)} suites passed")
    return results
