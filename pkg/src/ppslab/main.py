"""Command-line entry point for ppslab.

Subcommands:
    sweep      meter and system values over devices, postselections and strengths
    violation  direct same-hole value against the LL + RR sum
    classical  classical same-hole statistic, exact and sampled
    check      invariant suite; exit status 0 iff every check passes

Usage:
    ppslab sweep --devices same,LL --quadratures imaginary --output sweep.csv
    python -m ppslab check
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from .checks import DEFAULT_TOLERANCE, TOLERANCE_ENV, run_checks, tolerance_from_env
from .errors import PpsLabError, SweepConfigError
from .meter import Quadrature
from .pigeonhole import POSTSELECTIONS, Device
from .sweep import (
    CLASSICAL_COLUMNS,
    DEFAULT_GRID_POINTS,
    SWEEP_COLUMNS,
    VIOLATION_COLUMNS,
    Engine,
    OutputFormat,
    SweepConfig,
    classical_rows,
    format_config_for_logging,
    parse_choices,
    parse_strengths,
    render,
    sweep_rows,
    violation_rows,
    write_output,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1_000_000
DEFAULT_SEED = 0


def setup_logging(verbose: bool = False) -> None:
    """Configure logging for the application.

    Args:
        verbose: If True, set log level to DEBUG; otherwise INFO
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%H:%M:%S",
    )


def output_path(value: str | None) -> Path | None:
    """Map "-" (or no value) to stdout."""
    if value is None or value == "-":
        return None
    return Path(value)


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.CSV.value,
        help="Output format (default: csv)",
    )
    parser.add_argument(
        "--output",
        metavar="PATH",
        default="-",
        help="Output file, or - for stdout (default: -)",
    )


def _add_strengths_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strengths",
        default=f"grid:{DEFAULT_GRID_POINTS}",
        help=(
            "Comma separated strengths in (0, 1], or grid:<n> for n points from 0.01 to 1 "
            f"(default: grid:{DEFAULT_GRID_POINTS})"
        ),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppslab",
        description="Variable-strength pre- and postselected measurements of the "
        "quantum pigeonhole experiment",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
    # Closed-form sweep of every device, postselection and quadrature
    ppslab sweep --output sweep.csv

    # Circuit and closed form side by side for the paradox postselection
    ppslab sweep --postselections paradox --engine both --strengths 0.2,0.5,1

    # Sum-rule violation curve as JSON
    ppslab violation --format json

    # Invariant suite with a looser tolerance
    {TOLERANCE_ENV}=1e-8 ppslab check
        """,
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="Enable verbose (debug) logging",
    )

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    # Sweep command
    sweep_parser = subparsers.add_parser(
        "sweep",
        help="Meter and system values over a strength grid",
    )
    sweep_parser.add_argument(
        "--devices",
        default=",".join(d.value for d in Device),
        help="Comma separated subset of same,LL,RR (default: all)",
    )
    sweep_parser.add_argument(
        "--postselections",
        default=",".join(POSTSELECTIONS),
        help="Comma separated subset of paradox,CC,CA,AC,AA (default: all)",
    )
    _add_strengths_argument(sweep_parser)
    sweep_parser.add_argument(
        "--quadratures",
        default=",".join(q.value for q in Quadrature),
        help="Comma separated subset of real,imaginary (default: both)",
    )
    sweep_parser.add_argument(
        "--engine",
        choices=[e.value for e in Engine],
        default=Engine.CLOSED_FORM.value,
        help="Simulation engine; both emits paired rows (default: closed_form)",
    )
    _add_output_arguments(sweep_parser)

    # Violation command
    violation_parser = subparsers.add_parser(
        "violation",
        help="Direct same-hole value against the LL + RR sum",
    )
    _add_strengths_argument(violation_parser)
    _add_output_arguments(violation_parser)

    # Classical command
    classical_parser = subparsers.add_parser(
        "classical",
        help="Classical same-hole statistic, exact and Monte Carlo",
    )
    classical_parser.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLES,
        help=f"Monte Carlo samples per distribution (default: {DEFAULT_SAMPLES})",
    )
    classical_parser.add_argument(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help=f"Random seed (default: {DEFAULT_SEED})",
    )
    _add_output_arguments(classical_parser)

    # Check command
    subparsers.add_parser(
        "check",
        help=f"Run the invariant suite (tolerance from {TOLERANCE_ENV}, "
        f"default {DEFAULT_TOLERANCE:g})",
    )
    return parser


def config_from_args(args: argparse.Namespace) -> SweepConfig:
    """Build a SweepConfig from parsed sweep arguments.

    Raises:
        SweepConfigError: If any selection is empty or unknown
    """
    devices = parse_choices(args.devices, [d.value for d in Device], "devices")
    postselections = parse_choices(args.postselections, POSTSELECTIONS, "postselections")
    quadratures = parse_choices(args.quadratures, [q.value for q in Quadrature], "quadratures")
    return SweepConfig(
        devices=tuple(Device(d) for d in devices),
        postselections=postselections,
        strengths=parse_strengths(args.strengths),
        quadratures=tuple(Quadrature(q) for q in quadratures),
        engine=Engine(args.engine),
        output=output_path(args.output),
        format=OutputFormat(args.format),
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    """Write one row per device, postselection, quadrature, engine and strength."""
    config = config_from_args(args)
    logger.info("[SWEEP] Configuration:")
    for line in format_config_for_logging(config).split("\n"):
        logger.info(f"[SWEEP]   {line}")
    rows = sweep_rows(config)
    write_output(render(rows, SWEEP_COLUMNS, config.format), config.output)
    logger.info(f"[SWEEP] Wrote {len(rows)} rows")
    return 0


def cmd_violation(args: argparse.Namespace) -> int:
    """Write the pigeonhole and sum-rule violation table."""
    rows = violation_rows(parse_strengths(args.strengths))
    write_output(render(rows, VIOLATION_COLUMNS, OutputFormat(args.format)),
                 output_path(args.output))
    violated = sum(1 for r in rows if r["pigeonhole_violated"])
    logger.info(f"[VIOLATION] Pigeonhole principle violated at {violated}/{len(rows)} strengths")
    return 0


def cmd_classical(args: argparse.Namespace) -> int:
    """Write exact and sampled classical same-hole probabilities."""
    if args.samples < 1:
        raise SweepConfigError(f"--samples must be at least 1, got {args.samples}")
    rows = classical_rows(args.samples, args.seed)
    write_output(render(rows, CLASSICAL_COLUMNS, OutputFormat(args.format)),
                 output_path(args.output))
    logger.info(f"[CLASSICAL] {rows[0]['distribution']} gives "
                f"{rows[0]['same_pair_exact']:.12g}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    """Run the invariant suite; exit status 0 iff all checks pass."""
    tol = tolerance_from_env()
    logger.info(f"[CHECK] Tolerance {tol:g}")
    results = run_checks(tol)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"[CHECK] {len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        return 1
    logger.info(f"[CHECK] All {len(results)} checks passed")
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "violation": cmd_violation,
    "classical": cmd_classical,
    "check": cmd_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point.

    Returns:
        Exit status: 0 on success, 1 on invalid input, degenerate runs or
        failed checks
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    command = COMMANDS.get(args.command)
    if command is None:
        parser.print_help()
        return 0

    try:
        return command(args)
    except PpsLabError as e:
        logger.error(f"[MAIN] {args.command}: {e}")
        return 1
    except OSError as e:
        logger.error(f"[MAIN] Cannot write output: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
