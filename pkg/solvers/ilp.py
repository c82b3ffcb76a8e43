"""Integer program over hub balances and the solution it produces."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from core.errors import InvalidInput, UnknownNode, UnvalidatedInput
from core.pcn import Flow, Topology, Transaction

logger = logging.getLogger(__name__)

MAX_LOAD = int(np.iinfo(np.int64).max)


@dataclass(frozen=True, eq=False)
class IlpInstance:
    """Select x in {0,1}^k maximizing w.x subject to A.x <= b.

    Rows follow the factory's hub order and columns follow the input order of
    the transactions. Column j holds +w_j in the sender's hub row and -w_j in
    the recipient's hub row, so a transaction between two nodes of one hub
    has an all-zero column.
    """

    topology: Topology
    transactions: tuple[Transaction, ...]
    matrix: np.ndarray
    cover: tuple[int, ...]
    weights: tuple[int, ...]

    @property
    def num_txns(self) -> int:
        return len(self.transactions)

    @property
    def num_hubs(self) -> int:
        return len(self.cover)

    @property
    def txn_ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.transactions)

    @property
    def upper(self) -> tuple[int, ...]:
        return (1,) * self.num_txns

    @property
    def delta(self) -> int:
        if self.matrix.size == 0:
            return 0
        return int(np.abs(self.matrix).max())

    def zero_columns(self) -> list[int]:
        """Columns that never change the factory, in input order."""
        if self.num_txns == 0:
            return []
        return [int(j) for j in np.flatnonzero(~self.matrix.any(axis=0))]

    def nonzero_columns_by_id(self) -> list[int]:
        """Columns that move factory balance, ordered by transaction id."""
        zero = set(self.zero_columns())
        columns = [j for j in range(self.num_txns) if j not in zero]
        return sorted(columns, key=lambda j: self.transactions[j].id)

    def load(self, selection: Sequence[int]) -> np.ndarray:
        """A.x for a 0/1 selection vector in column order."""
        x = np.asarray(selection, dtype=np.int64)
        if self.num_txns == 0:
            return np.zeros(self.num_hubs, dtype=np.int64)
        return self.matrix @ x

    def is_feasible(self, selection: Sequence[int]) -> bool:
        return bool(np.all(self.load(selection) <= np.asarray(self.cover, dtype=np.int64)))


@dataclass(frozen=True)
class SolverStats:
    solver: str
    states_explored: int = 0
    pruned: bool = False
    wall_ms: float = 0.0
    radius: int | None = None


@dataclass(frozen=True)
class Solution:
    """A feasible selection with its throughput and routing flow."""

    selected: frozenset[str]
    throughput: int
    flow: Flow
    stats: SolverStats = field(default_factory=lambda: SolverStats("none"))

    def selected_in_order(self, txns: Sequence[Transaction]) -> list[Transaction]:
        return [t for t in txns if t.id in self.selected]


def client_totals(txns: Sequence[Transaction]) -> tuple[dict[str, int], dict[str, int]]:
    """Per-node sums of outgoing and incoming amounts."""
    outgoing: dict[str, int] = {}
    incoming: dict[str, int] = {}
    for txn in txns:
        outgoing[txn.sender] = outgoing.get(txn.sender, 0) + txn.amount
        incoming[txn.recipient] = incoming.get(txn.recipient, 0) + txn.amount
    return outgoing, incoming


def build_ilp(topo: Topology, txns: Sequence[Transaction]) -> IlpInstance:
    """Build the h x k integer program for a validated transaction list.

    Args:
        topo: Network whose factory balances form the cover vector
        txns: Transactions that already passed input validation

    Returns:
        The integer program

    Raises:
        UnknownNode: If a transaction endpoint is not in topo
        InvalidInput: If transaction ids repeat, or amounts or balances do not
            fit the int64 matrix
        UnvalidatedInput: If a client's submitted totals exceed its capacities
    """
    seen: set[str] = set()
    for txn in txns:
        if txn.id in seen:
            raise InvalidInput(f"Duplicate transaction id {txn.id}")
        seen.add(txn.id)
        for node in (txn.sender, txn.recipient):
            if not topo.has_node(node):
                raise UnknownNode(node, f"endpoint of {txn.id}")

    total = sum(t.amount for t in txns)
    if total > MAX_LOAD:
        raise InvalidInput(f"Transaction amounts sum to {total}, above the int64 limit {MAX_LOAD}")
    for hub, balance in zip(topo.hubs, topo.factory.balances, strict=True):
        if balance > MAX_LOAD:
            raise InvalidInput(f"Factory balance of {hub} is above the int64 limit {MAX_LOAD}")

    outgoing, incoming = client_totals(txns)
    for client, channel in topo.clients.items():
        if outgoing.get(client, 0) > channel.cap_out:
            raise UnvalidatedInput(client, "outgoing", outgoing[client], channel.cap_out)
        if incoming.get(client, 0) > channel.cap_in:
            raise UnvalidatedInput(client, "incoming", incoming[client], channel.cap_in)

    matrix = np.zeros((len(topo.hubs), len(txns)), dtype=np.int64)
    for j, txn in enumerate(txns):
        matrix[topo.factory.index(topo.hub_of(txn.sender)), j] += txn.amount
        matrix[topo.factory.index(topo.hub_of(txn.recipient)), j] -= txn.amount

    inst = IlpInstance(
        topology=topo,
        transactions=tuple(txns),
        matrix=matrix,
        cover=topo.factory.balances,
        weights=tuple(t.amount for t in txns),
    )
    logger.debug(f"Built {inst.num_hubs}x{inst.num_txns} program, delta={inst.delta}")
    return inst
