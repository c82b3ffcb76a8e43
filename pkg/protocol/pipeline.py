"""End-to-end protocol run: sharing, committee computation, validation, execution."""

import hashlib
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace

from core.errors import InvalidInput, UnknownNode
from core.pcn import FeeReport, Flow, Topology, Transaction, apply_flow, transition_fee
from execution.atomic import (
    PHASES,
    AdversaryStrategy,
    ExecutionOutcome,
    execute_atomic,
    honest_strategies,
)
from solvers import Solution, build_ilp, solve

from .config import ProtocolConfig
from .delegates import select_delegates
from .sharing import Share, ShareRNG, UserInput, reconstruct, share_input
from .validation import PeerData, ValidationResult, local_validate, validate_inputs
from .views import UserView, build_views

logger = logging.getLogger(__name__)


def derive_seed(seed: bytes, domain: bytes) -> bytes:
    """Independent 32-byte stream of the common randomness for one purpose."""
    return hashlib.sha256(seed + domain).digest()


def user_inputs(topo: Topology, txns: Sequence[Transaction], pad_to: int) -> list[UserInput]:
    """Group transactions by sender, attaching each node's adjacent balances.

    Raises:
        UnknownNode: If an endpoint is not in topo
        InvalidInput: If ids repeat or a list is longer than pad_to
    """
    by_sender: dict[str, list[Transaction]] = {node: [] for node in topo.nodes()}
    seen: set[str] = set()
    for txn in txns:
        if txn.id in seen:
            raise InvalidInput(f"Duplicate transaction id {txn.id}")
        seen.add(txn.id)
        for node in (txn.sender, txn.recipient):
            if not topo.has_node(node):
                raise UnknownNode(node, f"endpoint of {txn.id}")
        by_sender[txn.sender].append(txn)
    longest = max((len(v) for v in by_sender.values()), default=0)
    if longest > pad_to:
        raise InvalidInput(f"pad_to {pad_to} is shorter than the longest list ({longest})")

    inputs = []
    for node, own in by_sender.items():
        if node in topo.clients:
            channel = topo.clients[node]
            balances: tuple[int, ...] = (channel.cap_out, channel.cap_in)
        else:
            balances = (topo.factory.balances[topo.factory.index(node)],)
        inputs.append(UserInput(node, tuple(own), balances))
    return inputs


def rebuild_topology(topo: Topology, inputs: Sequence[UserInput]) -> Topology:
    """The network as reported by its users."""
    reported = {ui.owner: ui.balances for ui in inputs}
    clients = {
        c: replace(ch, cap_out=reported[c][0], cap_in=reported[c][1]) if c in reported else ch
        for c, ch in topo.clients.items()
    }
    balances = tuple(
        reported[h][0] if h in reported else b
        for h, b in zip(topo.hubs, topo.factory.balances, strict=True)
    )
    return Topology(replace(topo.factory, balances=balances), clients)


class DelegateCommittee:
    """Delegates each holding one share of every user input.

    The committee only recombines inputs when it holds every share, and it
    exposes nothing but the selected transactions and their flow.
    """

    def __init__(self, delegates: Sequence[str], nodes: Sequence[str]):
        self.delegates = tuple(delegates)
        self.nodes = tuple(nodes)
        self._held: dict[str, dict[str, Share]] = {d: {} for d in self.delegates}

    def receive(self, shares: Sequence[Share]) -> None:
        """Hand share i of one input to delegate i."""
        for delegate, share in zip(self.delegates, shares, strict=True):
            self._held[delegate][share.owner] = share

    def _inputs(self) -> list[UserInput]:
        owners = [n for n in self.nodes if any(n in held for held in self._held.values())]
        return [
            reconstruct([held[o] for held in self._held.values() if o in held], self.nodes)
            for o in owners
        ]

    def compute(
        self, topo: Topology, config: ProtocolConfig
    ) -> tuple[Solution, tuple[Transaction, ...], tuple[tuple[str, str], ...]]:
        """Validate the recombined inputs and solve.

        Returns:
            The solution, the transactions that passed validation, and the
            rejected (client, reason) pairs
        """
        inputs = self._inputs()
        state = rebuild_topology(topo, inputs)
        txns = [t for ui in inputs for t in ui.transactions]
        validation = validate_inputs(state, txns)
        inst = build_ilp(state, validation.kept)
        solution = solve(
            inst,
            config.solver,
            radius=config.radius,
            fallback=config.fallback,
            state_limit=config.state_limit,
            brute_force_limit=config.brute_force_limit,
        )
        return solution, validation.kept, validation.rejected_users


@dataclass(frozen=True)
class FlowComputation:
    solution: Solution
    selected: tuple[Transaction, ...]
    views: Mapping[str, UserView]
    rejected: tuple[tuple[str, str], ...]
    delegates: tuple[str, ...]


def run_flow_computation(
    topo: Topology, txns: Sequence[Transaction], config: ProtocolConfig
) -> FlowComputation:
    """Share every padded input with the delegates, solve, and restrict the output per user.

    Args:
        topo: Current network state
        txns: Every submitted transaction
        config: Public run parameters

    Returns:
        Solution, selected transactions, per-user views and rejections
    """
    inputs = user_inputs(topo, txns, config.pad_to)
    delegates = select_delegates(topo.hubs, config.num_delegates, config.randomness_seed)
    rng = ShareRNG(int.from_bytes(derive_seed(config.randomness_seed, b"shares"), "big"))
    committee = DelegateCommittee(delegates, topo.nodes())
    for ui in inputs:
        committee.receive(share_input(ui, len(delegates), topo.nodes(), config.pad_to, rng))

    solution, kept, rejected = committee.compute(topo, config)
    selected = tuple(t for t in kept if t.id in solution.selected)
    views = build_views(topo, selected, solution.flow)
    logger.info(
        f"Flow computation selected {len(selected)} of {len(txns)} transactions "
        f"(throughput {solution.throughput}, {len(rejected)} rejections)"
    )
    return FlowComputation(solution, selected, views, rejected, tuple(delegates))


def validate_views(
    topo: Topology, txns: Sequence[Transaction], views: Mapping[str, UserView]
) -> dict[str, ValidationResult]:
    """Run local validation for every node against its own submissions."""
    peer_data = PeerData.from_topology(topo, views)
    results = {}
    for node in topo.nodes():
        own = [t for t in txns if t.sender == node]
        view = views.get(node, UserView(node))
        results[node] = local_validate(node, view, own, peer_data)
        if not results[node].ok:
            logger.warning(f"{node} aborts: {results[node].label} ({results[node].detail})")
    return results


def settle(
    topo: Topology,
    flow: Flow,
    validation: Mapping[str, ValidationResult],
    strategies: Mapping[str, AdversaryStrategy],
    config: ProtocolConfig,
) -> ExecutionOutcome:
    """Execute the flow unless some user aborted during local validation."""
    if not all(result.ok for result in validation.values()):
        total = topo.total_coins()
        return ExecutionOutcome(False, topo, (), False, PHASES, (total,) * (PHASES + 1))
    everyone = {**honest_strategies(topo.nodes()), **strategies}
    return execute_atomic(
        topo,
        flow,
        everyone,
        config.timeout,
        config.epsilon,
        alias_nonce=derive_seed(config.randomness_seed, b"aliases"),
    )


@dataclass(frozen=True)
class ProtocolReport:
    accepted: Solution
    selected: tuple[Transaction, ...]
    rejected_users: tuple[tuple[str, str], ...]
    views: Mapping[str, UserView]
    validation: Mapping[str, ValidationResult]
    fees: FeeReport
    outcome: ExecutionOutcome
    delegates: tuple[str, ...]


def run_protocol(
    topo: Topology,
    txns: Sequence[Transaction],
    config: ProtocolConfig,
    strategies: Mapping[str, AdversaryStrategy] | None = None,
) -> ProtocolReport:
    """Flow computation, local validation by every user, then atomic execution."""
    computation = run_flow_computation(topo, txns, config)
    validation = validate_views(topo, txns, computation.views)
    flow = computation.solution.flow
    outcome = settle(topo, flow, validation, strategies or {}, config)
    return ProtocolReport(
        accepted=computation.solution,
        selected=computation.selected,
        rejected_users=computation.rejected,
        views=computation.views,
        validation=validation,
        fees=transition_fee(topo, apply_flow(topo, flow)),
        outcome=outcome,
        delegates=computation.delegates,
    )
