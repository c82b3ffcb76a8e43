"""Base solver with the bookkeeping shared by every oracle."""

import logging
import time
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass

from core.errors import InternalConsistencyError
from core.pcn import Infeasible, aggregate_demand, route_demand

from .ilp import IlpInstance, Solution, SolverStats

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Selection:
    """Raw oracle output: a 0/1 vector in column order plus search statistics."""

    indicator: tuple[int, ...]
    states_explored: int = 0
    pruned: bool = False


def with_zero_columns(inst: IlpInstance, picked: Iterable[int]) -> tuple[int, ...]:
    """Indicator selecting the given columns plus every zero column."""
    indicator = [0] * inst.num_txns
    for j in inst.zero_columns():
        indicator[j] = 1
    for j in picked:
        indicator[j] = 1
    return tuple(indicator)


class BaseSolver(ABC):
    """Abstract base class for transaction-aggregation oracles.

    Subclasses implement _select; solve() times the search, checks the
    selection against the cover vector and routes the aggregate.
    """

    name = "base"
    radius: int | None = None

    def solve(self, inst: IlpInstance) -> Solution:
        """Solve an instance.

        Args:
            inst: Integer program built by build_ilp

        Returns:
            Feasible solution with routing flow and solver statistics
        """
        start = time.perf_counter()
        selection = self._select(inst)
        wall_ms = round((time.perf_counter() - start) * 1000, 3)
        stats = SolverStats(
            self.name, selection.states_explored, selection.pruned, wall_ms, self.radius
        )
        solution = finish(inst, selection.indicator, stats)
        logger.info(
            f"{self.name} selected {len(solution.selected)}/{inst.num_txns} transactions, "
            f"throughput {solution.throughput}, {stats.states_explored} states"
        )
        return solution

    @abstractmethod
    def _select(self, inst: IlpInstance) -> Selection:
        """Choose the transactions to aggregate."""


def finish(inst: IlpInstance, indicator: tuple[int, ...], stats: SolverStats) -> Solution:
    """Turn a selection vector into a routed Solution.

    Raises:
        InternalConsistencyError: If the selection violates the cover or its
            aggregate cannot be routed
    """
    if not inst.is_feasible(indicator):
        raise InternalConsistencyError(f"{stats.solver} returned a selection above the cover")
    chosen = [t for t, x in zip(inst.transactions, indicator, strict=True) if x]
    routed = route_demand(inst.topology, aggregate_demand(chosen))
    if isinstance(routed, Infeasible):
        raise InternalConsistencyError(
            f"Aggregate of a feasible selection failed to route ({routed.reason} at {routed.node})"
        )
    return Solution(
        selected=frozenset(t.id for t in chosen),
        throughput=sum(t.amount for t in chosen),
        flow=routed,
        stats=stats,
    )
