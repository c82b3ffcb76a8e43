"""Independent check of a report against the scenario it claims to answer."""

import logging
from dataclasses import dataclass

from core.errors import InvalidInput, StateExplosion, StructureMismatch, TooLarge, UnknownNode
from core.pcn import apply_flow, check_flow_feasible, transition_fee
from protocol.pipeline import settle, validate_views
from protocol.validation import validate_inputs
from protocol.views import build_views
from solvers import SOLVERS, build_ilp, make_solver

from .report import ExecutionSummary, Report, sequential_baseline
from .scenario import Scenario

logger = logging.getLogger(__name__)

NOT_SUBMITTED = "NotSubmitted"
FLOW_MISMATCH = "FlowMismatch"
THROUGHPUT_MISMATCH = "ThroughputMismatch"
INFEASIBLE_FLOW = "InfeasibleFlow"
FEE_MISMATCH = "FeeMismatch"
BASELINE_MISMATCH = "BaselineMismatch"
REJECTED_USERS_MISMATCH = "RejectedUsersMismatch"
ZERO_COLUMN_CLOSURE = "ZeroColumnClosure"
EXECUTION_MISMATCH = "ExecutionMismatch"
VALIDATION_MISMATCH = "ValidationMismatch"
SOLVER_STATS_MISMATCH = "SolverStatsMismatch"


@dataclass(frozen=True)
class VerifyResult:
    reason: str | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.reason is None


def _fail(reason: str, detail: str) -> VerifyResult:
    logger.warning(f"Verification failed: {reason} ({detail})")
    return VerifyResult(reason, detail)


def verify_report(scenario: Scenario, report: Report) -> VerifyResult:
    """Re-run local validation for every user, then recheck report-level facts.

    Args:
        scenario: The scenario the report answers
        report: Parsed report

    Returns:
        VerifyResult naming the first failed check, or an ok result
    """
    topo, txns = scenario.topology, scenario.transactions
    by_id = {t.id: t for t in txns}
    ids = report.selected_txn_ids
    unknown = [i for i in ids if i not in by_id]
    if unknown:
        return _fail(NOT_SUBMITTED, f"{unknown[0]} was never submitted")
    if len(set(ids)) != len(ids):
        return _fail(NOT_SUBMITTED, "a transaction is selected twice")
    chosen = set(ids)
    selected = [t for t in txns if t.id in chosen]

    flow = report.flow
    try:
        feasible = check_flow_feasible(topo, flow)
    except (UnknownNode, StructureMismatch) as e:
        return _fail(FLOW_MISMATCH, str(e))

    views = build_views(topo, selected, flow)
    validation = validate_views(topo, txns, views)
    for node, result in validation.items():
        if not result.ok:
            return _fail(result.label, f"{node}: {result.detail}")

    throughput = sum(t.amount for t in selected)
    if report.throughput != throughput:
        return _fail(
            THROUGHPUT_MISMATCH, f"reported {report.throughput}, selection sums to {throughput}"
        )
    if not feasible:
        return _fail(INFEASIBLE_FLOW, "flow exceeds a capacity")

    fees = transition_fee(topo, apply_flow(topo, flow))
    if report.fees != fees or report.fees_total != fees.total:
        return _fail(FEE_MISMATCH, f"expected total {fees.total}, reported {report.fees_total}")

    if report.baseline != sequential_baseline(topo, selected):
        return _fail(BASELINE_MISMATCH, "sequential baseline differs")

    inputs = validate_inputs(topo, txns)
    if report.rejected_users != inputs.rejected_users:
        return _fail(REJECTED_USERS_MISMATCH, "rejections differ from input validation")
    kept = {t.id for t in inputs.kept}
    dropped = [i for i in ids if i not in kept]
    if dropped:
        return _fail(REJECTED_USERS_MISMATCH, f"{dropped[0]} did not pass input validation")

    inst = build_ilp(topo, inputs.kept)
    missing = [inst.txn_ids[j] for j in inst.zero_columns() if inst.txn_ids[j] not in chosen]
    if missing:
        return _fail(ZERO_COLUMN_CLOSURE, f"{missing[0]} moves no factory balance but is missing")

    stats = report.solver_stats
    if stats.solver not in SOLVERS or stats.wall_ms < 0:
        return _fail(SOLVER_STATS_MISMATCH, f"solver {stats.solver!r}")
    config = scenario.config
    try:
        solver = make_solver(
            stats.solver, stats.radius, config.state_limit, config.brute_force_limit
        )
        rerun = solver.solve(inst).stats
    except (InvalidInput, StateExplosion, TooLarge) as e:
        return _fail(SOLVER_STATS_MISMATCH, f"{stats.solver} does not rerun: {e}")
    reported = (stats.states_explored, stats.pruned, stats.radius)
    if reported != (rerun.states_explored, rerun.pruned, rerun.radius):
        return _fail(
            SOLVER_STATS_MISMATCH,
            f"rerun gives {rerun.states_explored} states, pruned={rerun.pruned}",
        )

    if report.validation is not None:
        labels = {node: result.label for node, result in validation.items()}
        if dict(report.validation) != labels:
            return _fail(VALIDATION_MISMATCH, "per-user validation results differ")
    if report.execution is not None:
        expected = ExecutionSummary.from_outcome(
            settle(topo, flow, validation, scenario.adversary, scenario.config)
        )
        if report.execution != expected:
            return _fail(EXECUTION_MISMATCH, f"expected committed={expected.committed}")

    logger.info(f"Report verified: {len(ids)} transactions, throughput {throughput}")
    return VerifyResult()
