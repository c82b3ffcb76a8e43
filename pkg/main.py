#!/usr/bin/env python3
"""Main entry point for the transaction aggregation simulator.

Subcommands:
    wiser solve SCENARIO              # Aggregate and route, no execution
    wiser simulate SCENARIO           # Full protocol run, execution included
    wiser verify SCENARIO REPORT      # Re-check a report
    wiser reduce-subset-sum T A...    # Print the scenario deciding a subset-sum instance
    wiser bench --hubs 3 --delta 5    # Solver timing as CSV

Exit codes: 0 success, 1 verification failure, 2 infeasible, aborted or
pruned, 3 invalid input.
"""

import argparse
import logging
import sys

from cli.commands import (
    EXIT_ABORTED,
    EXIT_INVALID,
    cmd_bench,
    cmd_reduce_subset_sum,
    cmd_simulate,
    cmd_solve,
    cmd_verify,
)
from cli.config import CliConfig
from core.errors import StateExplosion, WiserError
from solvers import SOLVERS


def setup_logging(level: str = "INFO"):
    """Configure logging for the application.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR)
    """
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


class ArgumentParser(argparse.ArgumentParser):
    """Parser whose usage errors exit with the invalid-input code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def k_list(text: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        message = f"expected comma-separated integers, got {text!r}"
        raise argparse.ArgumentTypeError(message) from None
    if not values or any(v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"expected non-negative integers, got {text!r}")
    return values


def _solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--solver", choices=list(SOLVERS), help="Aggregation oracle")
    parser.add_argument("--radius", type=int, help="State radius for dp-bounded")
    parser.add_argument("--output", help="Write the result here instead of standard output")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="wiser", description="Transaction aggregation simulator")
    parser.add_argument("--env-file", help="Path to a .env file")
    parser.add_argument("--log-level", help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("solve", "Select and route a throughput-maximal sublist"),
        ("simulate", "Run the full protocol including atomic execution"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("scenario", help="Scenario JSON file, or - for standard input")
        _solver_flags(p)
        p.add_argument("--seed", help="Common randomness as 64 hex characters")
        p.add_argument("--fallback", choices=list(SOLVERS), help="Solver used on StateExplosion")
        if name == "simulate":
            p.add_argument(
                "--adversary",
                action="append",
                metavar="NODE=STRATEGY",
                help="Strategy of one party, e.g. c1=withhold-signature",
            )

    p = sub.add_parser("verify", help="Check a report against its scenario")
    p.add_argument("scenario")
    p.add_argument("report")

    p = sub.add_parser("reduce-subset-sum", help="Encode a subset-sum instance as a scenario")
    p.add_argument("target", type=int)
    p.add_argument("items", type=int, nargs="+")
    _solver_flags(p)
    p.add_argument("--seed", help="Common randomness as 64 hex characters")

    p = sub.add_parser("bench", help="Time the solver on generated instances")
    p.add_argument("--hubs", type=int, default=3)
    p.add_argument("--delta", type=int, default=5)
    p.add_argument("--k-list", type=k_list, default=[1000, 2000, 4000])
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--margin", type=int, help="Cover slack below the all-selected net outflow")
    _solver_flags(p)
    return parser


# Registry of available subcommands
COMMANDS = {
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "reduce-subset-sum": cmd_reduce_subset_sum,
    "bench": cmd_bench,
}


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, dispatch one subcommand and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    try:
        config = CliConfig(args.env_file)
        setup_logging(args.log_level or config.log_level)
        return COMMANDS[args.command](args, config)
    except StateExplosion as e:
        print(f"State explosion: {e}", file=sys.stderr)
        return EXIT_ABORTED
    except ValueError as e:
        print(f"Invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except WiserError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ABORTED
    except Exception as e:
        print(f"Fatal error: {e}", file=sys.stderr)
        return EXIT_ABORTED


def main():
    """Main entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
