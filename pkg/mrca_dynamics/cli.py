"""
Command-line front end: `mrca <subcommand> ...`.

Machine-readable output (CSV or JSON) goes to stdout or to --out; log lines and
summaries go to stderr. Exit codes: 0 success, 1 usage or configuration error,
2 numerical failure, 3 failed acceptance suite.

CSV columns:
    kernel      x, t, y, density, atom, zero_mass
    simulate    stream, T, L, R           (--marginal: stream, t, A)
    stationary  draw, x                   (--x: x, density, cdf)
    jumpchain   n, L, R
    csbp laplace    x, t, theta, delta, value
    csbp sample-z   draw, z

JSON output: classify, dual-test, accept and csbp lemma51 (alias levy-lifetime).
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from mrca_dynamics.__version__ import __version__
from mrca_dynamics.acceptance import run_suites
from mrca_dynamics.branching import laplace_delta_family, lemma51_check, sample_Z_from_zero
from mrca_dynamics.config.logging import configure_logging, get_logger
from mrca_dynamics.config.settings import (
    configure_settings,
    get_settings,
    load_config_file,
    reset_settings,
)
from mrca_dynamics.kernels import (
    prob_at_zero,
    stationary_cdf,
    stationary_density,
    transition_atom,
    transition_density,
)
from mrca_dynamics.measures import build_measure, classify
from mrca_dynamics.simulation import (
    make_rng,
    reversal_test,
    sample_stationary,
    simulate_batch,
    simulate_jump_chain,
)
from mrca_dynamics.utils.exceptions import (
    ConfigurationError,
    DomainError,
    MrcaError,
    NoStationaryLawError,
    NumericalError,
)
from mrca_dynamics.utils.output import write_csv, write_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_ACCEPTANCE = 3


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _measure(text: str):
    """Build a measure from JSON text or from a path to a JSON file."""
    payload = text.strip()
    if not payload.startswith("{"):
        path = Path(payload)
        if not path.is_file():
            raise ConfigurationError(f"--measure is neither a JSON object nor a file: {text!r}")
        payload = path.read_text()
    return build_measure(payload)


def _seed(value: Optional[int]) -> int:
    return get_settings().default_seed if value is None else value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrca",
        description="Age of the most recent common ancestor as a Markov process.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file of settings (default: $MRCA_CONFIG)")
    parser.add_argument(
        "--tolerance-scale", type=float, help="multiply every numeric tolerance by this factor"
    )
    parser.add_argument("--out", help="write output to this file instead of stdout")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    kernel = sub.add_parser("kernel", help="transition law P^x{A_t in dy}")
    kernel.add_argument("--measure", required=True, help="measure JSON or JSON file")
    kernel.add_argument("--x", type=_float_list, required=True, help="initial states")
    kernel.add_argument("--t", type=_float_list, required=True, help="elapsed times")
    kernel.add_argument(
        "--y", type=_float_list, required=True, help="target states (density 0 outside (0, x+t))"
    )

    classify = sub.add_parser("classify", help="regime classification")
    classify.add_argument("--measure", required=True)

    simulate = sub.add_parser("simulate", help="exact path simulation")
    simulate.add_argument("--measure", required=True)
    simulate.add_argument("--x0", type=float, help="initial state (default: stationary draw)")
    simulate.add_argument("--horizon", type=float, required=True)
    simulate.add_argument("--t0", type=float, help="zero resolution")
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--paths", type=int, default=1)
    simulate.add_argument("--parallel", type=int, default=1, help="worker processes")
    simulate.add_argument("--marginal", type=float, help="emit A(t) per path instead of jumps")

    stationary = sub.add_parser("stationary", help="stationary law draws or values")
    stationary.add_argument("--measure", required=True)
    stationary.add_argument("--n", type=int, default=1000)
    stationary.add_argument("--seed", type=int)
    stationary.add_argument("--x", type=_float_list, help="evaluate density and cdf instead")

    jumpchain = sub.add_parser("jumpchain", help="peak/trough chain simulation")
    jumpchain.add_argument("--measure", required=True)
    jumpchain.add_argument("--start-kind", choices=("peak", "trough"), default="peak")
    jumpchain.add_argument("--start", type=float, default=1.0)
    jumpchain.add_argument("--n", type=int, default=1000)
    jumpchain.add_argument("--seed", type=int)

    dual = sub.add_parser("dual-test", help="time-reversal test of the dual process")
    dual.add_argument("--measure", required=True)
    dual.add_argument("--window", type=float, help="window length (default: 4 x burn-in)")
    dual.add_argument("--paths", type=int, default=100)
    dual.add_argument("--seed", type=int)
    dual.add_argument("--negative-control", action="store_true")

    csbp = sub.add_parser("csbp", help="stable branching transforms and samplers")
    csbp_sub = csbp.add_subparsers(dest="csbp_command", required=True)
    laplace = csbp_sub.add_parser("laplace", help="delta-family Laplace transform on grids")
    laplace.add_argument("--beta", type=float, required=True)
    laplace.add_argument("--delta", type=float, default=0.0)
    laplace.add_argument("--x", type=_float_list, required=True)
    laplace.add_argument("--t", type=_float_list, required=True)
    laplace.add_argument("--theta", type=_float_list, required=True)
    sample_z = csbp_sub.add_parser("sample-z", help="exact draws of Z_t started at 0")
    sample_z.add_argument("--beta", type=float, required=True)
    sample_z.add_argument("--delta", type=float, required=True)
    sample_z.add_argument("--t", type=float, required=True)
    sample_z.add_argument("--n", type=int, default=1000)
    sample_z.add_argument("--seed", type=int)
    levy = csbp_sub.add_parser(
        "lemma51", aliases=["levy-lifetime"], help="Levy-measure lifetime tail residuals"
    )
    levy.add_argument("--beta", type=_float_list, default=[0.3, 0.5, 0.7, 0.9])
    levy.add_argument("--t", type=_float_list, default=[0.5, 1.0, 2.0])

    accept = sub.add_parser("accept", help="run acceptance suites")
    accept.add_argument("--suite", action="append", required=True, help="suite name or 'all'")
    accept.add_argument("--seed", type=int)
    accept.add_argument("--size-factor", type=float, default=1.0)
    return parser


def cmd_kernel(args: argparse.Namespace) -> int:
    meas = _measure(args.measure)
    rows = []
    for x in args.x:
        for t in args.t:
            atom = transition_atom(meas, x, t)
            zero = prob_at_zero(meas, x, t)
            for y in args.y:
                density = transition_density(meas, x, t, y) if 0.0 < y < x + t else 0.0
                rows.append((x, t, y, density, atom, zero))
    columns = ["x", "t", "y", "density", "atom", "zero_mass"]
    write_csv(pd.DataFrame(rows, columns=columns), args.out)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    report = classify(_measure(args.measure))
    write_json(report.to_dict(), args.out)
    logger.info(f"jump chains: {report.jump_chain}, stationary law: {report.has_stationary}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    meas = _measure(args.measure)
    if args.marginal is not None and not 0.0 <= args.marginal <= args.horizon:
        raise DomainError(f"--marginal must lie in [0, {args.horizon}], got {args.marginal}")
    results = simulate_batch(
        meas,
        args.x0,
        args.horizon,
        args.paths,
        _seed(args.seed),
        t0=args.t0,
        n_workers=args.parallel,
        verbose=args.verbose,
    )
    failed = [r for r in results if r["status"] != "success"]
    if failed:
        logger.error(f"{len(failed)} paths failed; first error: {failed[0]['error']}")
        return EXIT_NUMERICAL

    if args.marginal is not None:
        rows: list[tuple[Any, ...]] = [
            (r["stream"], args.marginal, r["path"].value_at(args.marginal)) for r in results
        ]
        frame = pd.DataFrame(rows, columns=["stream", "t", "A"])
    else:
        rows = [(r["stream"], T, L, R) for r in results for T, L, R in r["path"].jumps]
        frame = pd.DataFrame(rows, columns=["stream", "T", "L", "R"])
    write_csv(frame, args.out)
    return EXIT_OK


def cmd_stationary(args: argparse.Namespace) -> int:
    meas = _measure(args.measure)
    if args.x:
        rows = [(x, stationary_density(meas, x), stationary_cdf(meas, x)) for x in args.x]
        frame = pd.DataFrame(rows, columns=["x", "density", "cdf"])
    else:
        rng = make_rng(_seed(args.seed))
        draws = [sample_stationary(meas, rng) for _ in range(args.n)]
        frame = pd.DataFrame({"draw": np.arange(args.n), "x": draws})
    write_csv(frame, args.out)
    return EXIT_OK


def cmd_jumpchain(args: argparse.Namespace) -> int:
    meas = _measure(args.measure)
    rng = make_rng(_seed(args.seed))
    chain = simulate_jump_chain(meas, args.start_kind, args.start, args.n, rng)
    troughs = np.full(len(chain.peaks), np.nan)
    troughs[: len(chain.troughs)] = chain.troughs
    frame = pd.DataFrame({"n": np.arange(len(chain.peaks)), "L": chain.peaks, "R": troughs})
    write_csv(frame, args.out)
    if chain.absorbed_at_zero:
        logger.info(f"Chain absorbed at zero after {len(chain.troughs)} troughs")
    return EXIT_OK


def cmd_dual_test(args: argparse.Namespace) -> int:
    meas = _measure(args.measure)
    report = reversal_test(
        meas,
        args.window,
        args.paths,
        make_rng(_seed(args.seed)),
        negative_control=args.negative_control,
    )
    write_json(report.to_dict(), args.out)
    return EXIT_OK


def cmd_csbp(args: argparse.Namespace) -> int:
    if args.csbp_command == "laplace":
        rows = [
            (x, t, theta, args.delta, laplace_delta_family(x, t, theta, args.delta, args.beta))
            for x in args.x
            for t in args.t
            for theta in args.theta
        ]
        write_csv(pd.DataFrame(rows, columns=["x", "t", "theta", "delta", "value"]), args.out)
    elif args.csbp_command == "sample-z":
        rng = make_rng(_seed(args.seed))
        draws = sample_Z_from_zero(args.t, args.beta, args.delta, rng, size=args.n)
        write_csv(pd.DataFrame({"draw": np.arange(args.n), "z": draws}), args.out)
    else:
        residuals = [
            {"beta": beta, "t": t, "relative_error": lemma51_check(beta, t)}
            for beta in args.beta
            for t in args.t
        ]
        write_json(residuals, args.out)
    return EXIT_OK


def cmd_accept(args: argparse.Namespace) -> int:
    results = run_suites(args.suite, seed=args.seed, size_factor=args.size_factor)
    passed = all(r.passed for r in results)
    write_json(
        {"passed": passed, "suites": [r.to_dict() for r in results]},
        args.out,
    )
    return EXIT_OK if passed else EXIT_ACCEPTANCE


COMMANDS = {
    "kernel": cmd_kernel,
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "stationary": cmd_stationary,
    "jumpchain": cmd_jumpchain,
    "dual-test": cmd_dual_test,
    "csbp": cmd_csbp,
    "accept": cmd_accept,
}


def _apply_settings(args: argparse.Namespace) -> None:
    """Flags override the config file, which overrides environment and defaults."""
    reset_settings()
    overrides = load_config_file(args.config)
    if args.tolerance_scale is not None:
        if not args.tolerance_scale > 0:
            raise ConfigurationError(
                f"--tolerance-scale must be positive, got {args.tolerance_scale}"
            )
        overrides["tolerance_scale"] = args.tolerance_scale
    configure_settings(**overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, dispatch the subcommand and map failures to exit codes.

    Args:
        argv: Argument list without the program name; defaults to sys.argv[1:].

    Returns:
        Process exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        _apply_settings(args)
        configure_logging(verbose=args.verbose)
        return COMMANDS[args.command](args)
    except (ConfigurationError, DomainError, NoStationaryLawError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except NumericalError as e:
        logger.error(f"{args.command}: numerical failure: {e}", exc_info=args.verbose)
        return EXIT_NUMERICAL
    except MrcaError as e:
        logger.error(f"{args.command}: {e}", exc_info=args.verbose)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
