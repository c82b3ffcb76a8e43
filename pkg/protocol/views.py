"""Per-user restriction of a solution: what each party gets to see."""

import json
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from core.pcn import Flow, Topology, Transaction, channel_edge, factory_edge

logger = logging.getLogger(__name__)

SENDER = "sender"
RECIPIENT = "recipient"


@dataclass(frozen=True)
class RestrictedTxn:
    """A selected transaction as seen by one of its endpoints."""

    txn_id: str
    amount: int
    role: str
    counterparty: str


@dataclass(frozen=True)
class UserView:
    """Selected transactions involving the user, flow on its edges, and the involved count.

    Channel edges carry positive values when the client pays its hub. A hub
    also sees every factory entry since the factory is adjacent to all hubs.
    """

    user: str
    restricted_txns: tuple[RestrictedTxn, ...] = ()
    incident_flow: Mapping[str, int] = field(default_factory=dict)
    involved_count: int = 0

    def is_empty(self) -> bool:
        return not self.restricted_txns and not self.incident_flow

    def to_dict(self) -> dict:
        return {
            "user": self.user,
            "restricted_txns": [
                [t.txn_id, t.amount, t.role, t.counterparty] for t in self.restricted_txns
            ],
            "incident_flow": dict(self.incident_flow),
            "involved_count": self.involved_count,
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()


def incident_edges(topo: Topology, node: str) -> list[str]:
    """Edges adjacent to a node; a hub is adjacent to the whole factory."""
    if node in topo.clients:
        return [channel_edge(node)]
    return [channel_edge(c) for c in topo.clients_of(node)] + [factory_edge(h) for h in topo.hubs]


def involved_users(topo: Topology, txns: Sequence[Transaction], flow: Flow) -> set[str]:
    """Endpoints of nonzero selected transactions and of nonzero flow edges."""
    involved = {n for t in txns if t.amount for n in (t.sender, t.recipient)}
    for client in flow.client_net:
        involved.update((client, topo.hub_of(client)))
    if any(flow.factory_demand):
        involved.update(topo.hubs)
    return involved


def build_views(
    topo: Topology, selected: Sequence[Transaction], flow: Flow
) -> dict[str, UserView]:
    """One view per node of the topology.

    Zero-amount transactions are indistinguishable from padding and are left
    out; uninvolved users get an empty view with a zero count.
    """
    involved = involved_users(topo, selected, flow)
    edge_values = flow.edge_values(topo)
    views = {}
    for node in topo.nodes():
        if node not in involved:
            views[node] = UserView(node)
            continue
        restricted = []
        for txn in selected:
            if not txn.amount:
                continue
            if txn.sender == node:
                restricted.append(RestrictedTxn(txn.id, txn.amount, SENDER, txn.recipient))
            elif txn.recipient == node:
                restricted.append(RestrictedTxn(txn.id, txn.amount, RECIPIENT, txn.sender))
        restricted.sort(key=lambda r: r.txn_id)
        incident = {edge: edge_values.get(edge, 0) for edge in incident_edges(topo, node)}
        views[node] = UserView(node, tuple(restricted), incident, len(involved))
    logger.debug(f"Built views for {len(views)} users, {len(involved)} involved")
    return views
