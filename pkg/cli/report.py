"""Report documents emitted by solve and simulate."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from core.errors import InvalidInput, ScenarioError
from core.pcn import (
    FeeReport,
    Flow,
    Infeasible,
    Topology,
    Transaction,
    sequential_execute,
)
from execution.atomic import ExecutionOutcome
from execution.ledger import LedgerEvent
from protocol.validation import ValidationResult
from solvers import Solution, SolverStats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Baseline:
    """Outcome of executing the selected transactions one by one, in input order."""

    feasible: bool
    total_fee: int | None = None
    failed_at_index: int | None = None
    failed_txn_id: str | None = None

    def to_dict(self) -> dict[str, Any]:
        if self.feasible:
            return {"feasible": True, "total_fee": self.total_fee}
        return {
            "feasible": False,
            "failed_at_index": self.failed_at_index,
            "failed_txn_id": self.failed_txn_id,
        }


def sequential_baseline(topo: Topology, selected: Sequence[Transaction]) -> Baseline:
    result = sequential_execute(topo, selected)
    if isinstance(result, Infeasible):
        index = result.index if result.index is not None else 0
        return Baseline(False, failed_at_index=index, failed_txn_id=selected[index].id)
    return Baseline(True, total_fee=result.fees.total)


@dataclass(frozen=True)
class ExecutionSummary:
    committed: bool
    refunds_issued: bool
    events: tuple[LedgerEvent, ...] = ()

    @classmethod
    def from_outcome(cls, outcome: ExecutionOutcome) -> "ExecutionSummary":
        return cls(outcome.committed, outcome.refunds_issued, tuple(outcome.events))

    def to_dict(self) -> dict[str, Any]:
        return {
            "committed": self.committed,
            "refunds_issued": self.refunds_issued,
            "events": [e.to_dict() for e in self.events],
        }


@dataclass(frozen=True)
class Report:
    selected_txn_ids: tuple[str, ...]
    throughput: int
    flow: Flow
    fees: FeeReport
    fees_total: int
    baseline: Baseline
    rejected_users: tuple[tuple[str, str], ...]
    solver_stats: SolverStats
    execution: ExecutionSummary | None = None
    validation: Mapping[str, str] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "selected_txn_ids": list(self.selected_txn_ids),
            "throughput": self.throughput,
            "flow": {
                "client_net": dict(self.flow.client_net),
                "factory_demand": list(self.flow.factory_demand),
            },
            "fees": {
                "per_channel": dict(self.fees.per_channel),
                "factory": self.fees.factory,
                "total": self.fees_total,
            },
            "sequential_baseline": self.baseline.to_dict(),
            "execution": None if self.execution is None else self.execution.to_dict(),
            "validation": None if self.validation is None else dict(self.validation),
            "rejected_users": [list(r) for r in self.rejected_users],
            "solver_stats": {
                "solver": self.solver_stats.solver,
                "states_explored": self.solver_stats.states_explored,
                "pruned": self.solver_stats.pruned,
                "wall_ms": self.solver_stats.wall_ms,
                "radius": self.solver_stats.radius,
            },
        }


def build_report(
    topo: Topology,
    txns: Sequence[Transaction],
    solution: Solution,
    fees: FeeReport,
    rejected_users: Sequence[tuple[str, str]],
    outcome: ExecutionOutcome | None = None,
    validation: Mapping[str, ValidationResult] | None = None,
) -> Report:
    """Assemble a report; selected ids follow the scenario's input order."""
    selected = solution.selected_in_order(txns)
    return Report(
        selected_txn_ids=tuple(t.id for t in selected),
        throughput=solution.throughput,
        flow=solution.flow,
        fees=fees,
        fees_total=fees.total,
        baseline=sequential_baseline(topo, selected),
        rejected_users=tuple((node, reason) for node, reason in rejected_users),
        solver_stats=solution.stats,
        execution=None if outcome is None else ExecutionSummary.from_outcome(outcome),
        validation=None if validation is None else {n: r.label for n, r in validation.items()},
    )


def _get(doc: Mapping[str, Any], key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(doc, Mapping) or key not in doc:
        raise ScenarioError(f"Report {where} is missing {key!r}")
    value = doc[key]
    if kind is int and isinstance(value, bool):
        raise ScenarioError(f"Report {where}.{key} must be an integer")
    if not isinstance(value, kind):
        raise ScenarioError(f"Report {where}.{key} has the wrong type")
    return value


def _int_map(value: Any, where: str) -> dict[str, int]:
    if not isinstance(value, Mapping) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in value.values()
    ):
        raise ScenarioError(f"Report {where} must map ids to integers")
    return dict(value)


def _baseline(doc: Any) -> Baseline:
    feasible = _get(doc, "feasible", bool, "sequential_baseline")
    if feasible:
        return Baseline(True, total_fee=_get(doc, "total_fee", int, "sequential_baseline"))
    return Baseline(
        False,
        failed_at_index=_get(doc, "failed_at_index", int, "sequential_baseline"),
        failed_txn_id=_get(doc, "failed_txn_id", str, "sequential_baseline"),
    )


def _execution(doc: Any) -> ExecutionSummary | None:
    if doc is None:
        return None
    try:
        events = tuple(LedgerEvent(**e) for e in _get(doc, "events", list, "execution"))
    except TypeError as e:
        raise ScenarioError(f"Report execution.events is malformed: {e}") from e
    return ExecutionSummary(
        _get(doc, "committed", bool, "execution"),
        _get(doc, "refunds_issued", bool, "execution"),
        events,
    )


def _radius(doc: Mapping[str, Any]) -> int | None:
    radius = _get(doc, "radius", (int, type(None)), "solver_stats")
    if isinstance(radius, bool):
        raise ScenarioError("Report solver_stats.radius must be an integer or null")
    return radius


def parse_report(doc: Any) -> Report:
    """Read a report document back into a Report.

    Raises:
        ScenarioError: If a field is missing or has the wrong type
    """
    ids = _get(doc, "selected_txn_ids", list, "")
    if not all(isinstance(i, str) for i in ids):
        raise ScenarioError("Report selected_txn_ids must be strings")
    flow_doc = _get(doc, "flow", Mapping, "")
    factory_demand = _get(flow_doc, "factory_demand", list, "flow")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in factory_demand):
        raise ScenarioError("Report flow.factory_demand must hold integers")
    fees_doc = _get(doc, "fees", Mapping, "")
    rejected = _get(doc, "rejected_users", list, "")
    if not all(isinstance(r, list) and len(r) == 2 for r in rejected):
        raise ScenarioError("Report rejected_users must hold [node, reason] pairs")
    stats_doc = _get(doc, "solver_stats", Mapping, "")
    validation = doc.get("validation")
    if validation is not None and not (
        isinstance(validation, Mapping) and all(isinstance(v, str) for v in validation.values())
    ):
        raise ScenarioError("Report validation must map nodes to labels")

    try:
        fees = FeeReport(
            _int_map(_get(fees_doc, "per_channel", Mapping, "fees"), "fees.per_channel"),
            _get(fees_doc, "factory", int, "fees"),
        )
        return Report(
            selected_txn_ids=tuple(ids),
            throughput=_get(doc, "throughput", int, ""),
            flow=Flow(
                _int_map(_get(flow_doc, "client_net", Mapping, "flow"), "flow.client_net"),
                tuple(factory_demand),
            ),
            fees=fees,
            fees_total=_get(fees_doc, "total", int, "fees"),
            baseline=_baseline(_get(doc, "sequential_baseline", Mapping, "")),
            rejected_users=tuple((str(r[0]), str(r[1])) for r in rejected),
            solver_stats=SolverStats(
                _get(stats_doc, "solver", str, "solver_stats"),
                _get(stats_doc, "states_explored", int, "solver_stats"),
                _get(stats_doc, "pruned", bool, "solver_stats"),
                float(_get(stats_doc, "wall_ms", (int, float), "solver_stats")),
                _radius(stats_doc),
            ),
            execution=_execution(doc.get("execution")),
            validation=None if validation is None else dict(validation),
        )
    except InvalidInput as e:
        raise ScenarioError(f"Invalid report: {e}") from e
