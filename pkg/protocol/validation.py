"""Input validation before solving and local validation of the solver's output."""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import Enum

from core.pcn import Topology, Transaction, channel_edge, factory_edge
from solvers.ilp import client_totals

from .views import RECIPIENT, SENDER, RestrictedTxn, UserView

logger = logging.getLogger(__name__)

OUTGOING_CAPACITY = "outgoing-capacity"
INCOMING_CAPACITY = "incoming-capacity"


@dataclass(frozen=True)
class InputValidation:
    kept: tuple[Transaction, ...]
    rejected_users: tuple[tuple[str, str], ...]


def validate_inputs(topo: Topology, txns: Sequence[Transaction]) -> InputValidation:
    """Drop the lists of clients whose submissions reach their channel capacity.

    A client whose outgoing total is >= cap_out loses all its outgoing
    transactions; one whose incoming total is >= cap_in loses all its
    incoming ones. Rounds repeat until nothing changes, and each round drops
    outgoing lists before looking at incoming totals, since dropping a
    sender can bring its recipients back under capacity.

    Args:
        topo: Network the transactions will run on
        txns: Submitted transactions

    Returns:
        Surviving transactions in input order and the (client, reason) drops
    """
    blocked_out: set[str] = set()
    blocked_in: set[str] = set()
    rejected: list[tuple[str, str]] = []
    while True:
        kept = [t for t in txns if t.sender not in blocked_out and t.recipient not in blocked_in]
        outgoing, incoming = client_totals(kept)
        over_out = [
            c for c, ch in topo.clients.items() if c in outgoing and outgoing[c] >= ch.cap_out
        ]
        if over_out:
            blocked_out.update(over_out)
            rejected += [(c, OUTGOING_CAPACITY) for c in over_out]
            continue
        over_in = [
            c for c, ch in topo.clients.items() if c in incoming and incoming[c] >= ch.cap_in
        ]
        if over_in:
            blocked_in.update(over_in)
            rejected += [(c, INCOMING_CAPACITY) for c in over_in]
            continue
        break
    for client, reason in rejected:
        logger.warning(f"Rejected transactions of {client}: {reason}")
    return InputValidation(tuple(kept), tuple(rejected))


class AbortReason(str, Enum):
    NOT_SUBMITTED = "NotSubmitted"
    ENDPOINT_MISMATCH = "EndpointMismatch"
    FLOW_MISMATCH = "FlowMismatch"
    NET_FLOW_VIOLATION = "NetFlowViolation"


@dataclass(frozen=True)
class ValidationResult:
    """Ok when reason is None, otherwise the first failed check."""

    reason: AbortReason | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.reason is None

    @property
    def label(self) -> str:
        return "Ok" if self.reason is None else self.reason.value


OK = ValidationResult()


def _abort(reason: AbortReason, detail: str) -> ValidationResult:
    return ValidationResult(reason, detail)


@dataclass(frozen=True)
class PeerData:
    """Counterparty confirmations plus the public channel graph."""

    views: Mapping[str, UserView]
    channel_hubs: Mapping[str, str]
    hubs: tuple[str, ...]

    @classmethod
    def from_topology(cls, topo: Topology, views: Mapping[str, UserView]) -> "PeerData":
        return cls(views, {c: ch.hub for c, ch in topo.clients.items()}, topo.hubs)

    def counterparties(self, user: str, edge: str) -> list[str] | None:
        """Other endpoints of an edge, or None if the edge is not incident to user."""
        kind, _, node = edge.partition(":")
        if kind == "channel" and node in self.channel_hubs:
            hub = self.channel_hubs[node]
            if user == node:
                return [hub]
            if user == hub:
                return [node]
        elif kind == "factory" and node in self.hubs and user in self.hubs:
            return [h for h in self.hubs if h != user]
        return None


def _opposite(role: str) -> str:
    return RECIPIENT if role == SENDER else SENDER


def local_validate(
    user: str,
    view: UserView,
    own_submitted: Sequence[Transaction],
    peer_data: PeerData,
) -> ValidationResult:
    """Run the four local checks a user performs before execution.

    Args:
        user: The validating node
        view: What the committee sent to user
        own_submitted: Transactions user actually submitted
        peer_data: Counterparties' views and the public channel graph

    Returns:
        OK, or the first failing check: NotSubmitted, EndpointMismatch,
        FlowMismatch, NetFlowViolation, in that order
    """
    submitted = {t.id: t for t in own_submitted}
    for r in view.restricted_txns:
        if r.role != SENDER:
            continue
        txn = submitted.get(r.txn_id)
        if txn is None or (txn.sender, txn.recipient, txn.amount) != (
            user,
            r.counterparty,
            r.amount,
        ):
            return _abort(AbortReason.NOT_SUBMITTED, f"{user} never sent {r.txn_id} as shown")

    if view.user != user:
        return _abort(AbortReason.ENDPOINT_MISMATCH, f"view addressed to {view.user}")
    if (view.involved_count == 0) != view.is_empty():
        return _abort(AbortReason.ENDPOINT_MISMATCH, f"involved count {view.involved_count}")
    peers: set[str] = set()
    for r in view.restricted_txns:
        if r.role not in (SENDER, RECIPIENT):
            return _abort(AbortReason.ENDPOINT_MISMATCH, f"unknown role {r.role}")
        peer = peer_data.views.get(r.counterparty)
        mirrored = RestrictedTxn(r.txn_id, r.amount, _opposite(r.role), user)
        if peer is None or mirrored not in peer.restricted_txns:
            return _abort(
                AbortReason.ENDPOINT_MISMATCH, f"{r.counterparty} does not confirm {r.txn_id}"
            )
        peers.add(r.counterparty)

    edge_peers = {}
    for edge in view.incident_flow:
        others = peer_data.counterparties(user, edge)
        if others is None:
            return _abort(AbortReason.FLOW_MISMATCH, f"{edge} is not incident to {user}")
        edge_peers[edge] = others
        peers.update(others)
    for peer_id in sorted(peers):
        peer = peer_data.views.get(peer_id)
        if peer is not None and not peer.is_empty():
            if peer.involved_count != view.involved_count:
                return _abort(
                    AbortReason.ENDPOINT_MISMATCH,
                    f"{peer_id} counts {peer.involved_count} involved users, not "
                    f"{view.involved_count}",
                )

    for edge, value in view.incident_flow.items():
        for peer_id in edge_peers[edge]:
            peer = peer_data.views.get(peer_id)
            theirs = peer.incident_flow.get(edge, 0) if peer is not None else 0
            if theirs != value:
                return _abort(
                    AbortReason.FLOW_MISMATCH, f"{edge} is {value} here, {theirs} at {peer_id}"
                )

    demand = sum(r.amount if r.role == SENDER else -r.amount for r in view.restricted_txns)
    if user in peer_data.hubs:
        net = view.incident_flow.get(factory_edge(user), 0) - sum(
            view.incident_flow.get(channel_edge(c), 0)
            for c, hub in peer_data.channel_hubs.items()
            if hub == user
        )
    else:
        net = view.incident_flow.get(channel_edge(user), 0)
    if net != demand:
        return _abort(
            AbortReason.NET_FLOW_VIOLATION, f"net flow {net} at {user}, demand {demand}"
        )
    return OK
