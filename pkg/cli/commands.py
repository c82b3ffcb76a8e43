"""Subcommand implementations. Each returns a process exit code."""

import argparse
import csv
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from core.errors import InvalidInput, StateExplosion
from core.pcn import apply_flow, transition_fee
from execution.atomic import AdversaryStrategy
from protocol.config import ZERO_SEED, ProtocolConfig
from protocol.pipeline import run_flow_computation, run_protocol
from solvers import build_ilp, make_solver, subset_sum_reduce

from .config import CliConfig
from .generate import bench_instance
from .report import build_report, parse_report
from .scenario import Scenario, dump_scenario, load_scenario, parse_seed, read_document, to_json
from .verify import verify_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ABORTED = 2
EXIT_INVALID = 3

BENCH_HEADER = ("k", "seed", "solver", "wall_ms", "states")


def emit(text: str, output: str | None) -> None:
    """Write to the --output path, or standard output when none is given."""
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(output).write_text(text, encoding="utf-8")
    logger.info(f"Wrote {output}")


def apply_flags(scenario: Scenario, args: argparse.Namespace) -> Scenario:
    """Let command-line flags override the scenario's own parameters.

    Raises:
        InvalidInput: If the resulting parameters are inconsistent
    """
    changes: dict = {}
    if getattr(args, "solver", None):
        changes["solver"] = args.solver
    if getattr(args, "radius", None) is not None:
        changes["radius"] = args.radius
    if getattr(args, "fallback", None):
        changes["fallback"] = args.fallback
    if getattr(args, "seed", None):
        changes["randomness_seed"] = parse_seed(args.seed)
    adversary = dict(scenario.adversary)
    for entry in getattr(args, "adversary", None) or []:
        party, sep, text = entry.partition("=")
        if not sep or not scenario.topology.has_node(party):
            raise InvalidInput(f"--adversary expects NODE=STRATEGY, got {entry!r}")
        adversary[party] = AdversaryStrategy.parse(text)
    return replace(scenario, config=replace(scenario.config, **changes), adversary=adversary)


def cmd_solve(args: argparse.Namespace, config: CliConfig) -> int:
    """Aggregate and route without executing; report fees and the sequential baseline."""
    scenario = apply_flags(load_scenario(args.scenario, config), args)
    topo, txns = scenario.topology, scenario.transactions
    try:
        computation = run_flow_computation(topo, txns, scenario.config)
    except StateExplosion as e:
        logger.error(f"Solver gave up: {e}")
        return EXIT_ABORTED

    solution = computation.solution
    fees = transition_fee(topo, apply_flow(topo, solution.flow))
    report = build_report(topo, txns, solution, fees, computation.rejected)
    emit(to_json(report.to_dict()), args.output)

    if solution.stats.pruned and scenario.config.fallback is None:
        logger.warning(f"{solution.stats.solver} pruned states; the result may not be optimal")
        return EXIT_ABORTED
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, config: CliConfig) -> int:
    """Run the whole protocol, execution included."""
    scenario = apply_flags(load_scenario(args.scenario, config), args)
    topo, txns = scenario.topology, scenario.transactions
    try:
        result = run_protocol(topo, txns, scenario.config, scenario.adversary)
    except StateExplosion as e:
        logger.error(f"Solver gave up: {e}")
        return EXIT_ABORTED

    report = build_report(
        topo,
        txns,
        result.accepted,
        result.fees,
        result.rejected_users,
        outcome=result.outcome,
        validation=result.validation,
    )
    emit(to_json(report.to_dict()), args.output)
    if not result.outcome.committed:
        logger.warning("Execution did not commit; every balance was refunded")
        return EXIT_ABORTED
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: CliConfig) -> int:
    """Check a report against its scenario; the failing check goes to standard error."""
    scenario = load_scenario(args.scenario, config)
    report = parse_report(read_document(args.report))
    result = verify_report(scenario, report)
    if not result.ok:
        print(f"{result.reason}: {result.detail}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_reduce_subset_sum(args: argparse.Namespace, config: CliConfig) -> int:
    """Print the aggregation scenario that decides a subset-sum instance."""
    reduced = subset_sum_reduce(args.target, args.items)
    protocol_config = ProtocolConfig(
        num_delegates=len(reduced.topology.hubs),
        randomness_seed=parse_seed(args.seed) if args.seed else ZERO_SEED,
        pad_to=len(args.items),
        solver=args.solver or "dp",
        radius=args.radius,
        timeout=config.timeout,
        epsilon=config.epsilon,
    )
    scenario = Scenario(reduced.topology, reduced.txns, protocol_config)
    emit(to_json(dump_scenario(scenario)), args.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace, config: CliConfig) -> int:
    """Time the solver on generated instances and print one CSV row per (k, seed)."""
    if not 2 <= args.hubs <= config.max_bench_hubs:
        logger.error(f"--hubs must be between 2 and {config.max_bench_hubs}, got {args.hubs}")
        return EXIT_INVALID
    if args.delta < 1 or args.seeds < 1:
        logger.error("--delta and --seeds must be positive")
        return EXIT_INVALID

    choice = args.solver or "dp"
    solver = make_solver(choice, args.radius, config.state_limit, config.brute_force_limit)
    rows = []
    for k in args.k_list:
        for seed in range(args.seeds):
            topo, txns = bench_instance(args.hubs, args.delta, k, seed, args.margin)
            solution = solver.solve(build_ilp(topo, txns))
            rows.append((k, seed, choice, solution.stats.wall_ms, solution.stats.states_explored))
            logger.info(f"k={k} seed={seed}: {solution.stats.wall_ms} ms")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    writer.writerows(rows)
    emit(buffer.getvalue(), args.output)
    return EXIT_OK
