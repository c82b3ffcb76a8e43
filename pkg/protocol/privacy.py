"""Indistinguishability experiment over the views handed to corrupted users."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from core.errors import UnknownNode
from core.pcn import Topology, Transaction, channel_edge, factory_edge

from .config import ProtocolConfig
from .pipeline import FlowComputation, run_flow_computation
from .views import involved_users

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PrivacyResult:
    """Admissibility of a pair of lists and the observed outcome.

    constraints_ok covers the flow on the corrupted subgraph and the set of
    involved users. own_txns_equal narrows the game further: corrupted users
    receive their own selected transactions, so a pair where those differ is
    distinguishable by construction and is not admissible.
    """

    constraints_ok: bool
    own_txns_equal: bool
    views_equal: bool

    @property
    def admissible(self) -> bool:
        return self.constraints_ok and self.own_txns_equal

    @property
    def distinguishable(self) -> bool:
        return self.admissible and not self.views_equal


def corrupted_edges(topo: Topology, corrupted: Iterable[str]) -> list[str]:
    """Edges of the corrupted subgraph.

    Corrupting any hub pulls in every hub and therefore every edge.

    Raises:
        UnknownNode: If a corrupted node is not in topo
    """
    corrupted = set(corrupted)
    for node in sorted(corrupted):
        if not topo.has_node(node):
            raise UnknownNode(node, "corrupted node")
    if any(topo.is_hub(n) for n in corrupted):
        return [channel_edge(c) for c in topo.clients] + [factory_edge(h) for h in topo.hubs]
    return [channel_edge(c) for c in topo.clients if c in corrupted]


def _own_selected(run: FlowComputation, node: str) -> list[tuple[str, str, str, int]]:
    return sorted(
        (t.id, t.sender, t.recipient, t.amount)
        for t in run.selected
        if t.amount and node in (t.sender, t.recipient)
    )


def privacy_experiment(
    topo: Topology,
    corrupted: Iterable[str],
    t0: Sequence[Transaction],
    t1: Sequence[Transaction],
    config: ProtocolConfig,
) -> PrivacyResult:
    """Run the flow computation on both lists and compare what the adversary sees.

    The constraints hold when the flow restricted to the corrupted subgraph
    and the set of involved users coincide under both lists. The pair is
    admissible when, in addition, every corrupted user has the same own
    selected transactions in both runs.

    Args:
        topo: Network both runs start from
        corrupted: Nodes whose transcripts the adversary reads
        t0: First candidate list
        t1: Second candidate list
        config: Shared run parameters, seed included

    Returns:
        Admissibility and whether the corrupted views match byte for byte
    """
    corrupted = sorted(set(corrupted))
    edges = corrupted_edges(topo, corrupted)
    runs = [run_flow_computation(topo, txns, config) for txns in (t0, t1)]

    restricted = []
    involved = []
    own = []
    for run in runs:
        values = run.solution.flow.edge_values(topo)
        restricted.append({e: values.get(e, 0) for e in edges})
        involved.append(involved_users(topo, run.selected, run.solution.flow))
        own.append({n: _own_selected(run, n) for n in corrupted})
    constraints_ok = restricted[0] == restricted[1] and involved[0] == involved[1]

    views_equal = all(
        runs[0].views[n].canonical_bytes() == runs[1].views[n].canonical_bytes()
        for n in corrupted
    )
    result = PrivacyResult(constraints_ok, own[0] == own[1], views_equal)
    if result.distinguishable:
        logger.error(f"Admissible pair produced different views for {corrupted}")
    return result
