"""All-or-nothing execution of a flow's channel updates.

Every receiver prepares an epoch transaction paying a dust output of epsilon
to each receiver. Senders acknowledge every epoch transaction, then lock
their payments behind one of its outputs until start + timeout. Updates take
effect only when a fully acknowledged epoch transaction is posted and every
payment is claimed in time; otherwise the timelocks expire and everything is
refunded.
"""

import hashlib
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, replace
from enum import Enum, IntEnum

from core.errors import InfeasibleFlow, InvalidInput, MissingStrategy
from core.pcn import Flow, Topology, apply_flow, check_flow_feasible

from .ledger import Ledger, LedgerEvent, advance_ledger

logger = logging.getLogger(__name__)

ALIAS_LENGTH = 10


class Phase(IntEnum):
    EPOCH_CREATION = 1
    SIGNATURES = 2
    PAYMENTS = 3
    SETTLEMENT = 4


PHASES = len(Phase)


class StrategyKind(str, Enum):
    HONEST = "honest"
    WITHHOLD_SIGNATURE = "withhold-signature"
    WITHHOLD_EPOCH_POSTS = "withhold-epoch-posts"
    RECEIVER_NO_SPEND = "receiver-no-spend"
    CRASH_AT_PHASE = "crash-at-phase"


@dataclass(frozen=True)
class AdversaryStrategy:
    """How one party behaves. A crashed party acts only in phases before crash_phase."""

    kind: StrategyKind = StrategyKind.HONEST
    crash_phase: int | None = None

    def __post_init__(self):
        if (self.kind == StrategyKind.CRASH_AT_PHASE) != (self.crash_phase is not None):
            raise InvalidInput("crash_phase is required exactly for crash-at-phase")

    @classmethod
    def parse(cls, text: str) -> "AdversaryStrategy":
        """Parse "honest", "withhold-signature", ... or "crash-at-phase:N"."""
        name, _, arg = text.strip().partition(":")
        try:
            kind = StrategyKind(name)
        except ValueError:
            choices = ", ".join(k.value for k in StrategyKind)
            raise InvalidInput(f"Unknown strategy {text!r}. Available: {choices}") from None
        if kind != StrategyKind.CRASH_AT_PHASE:
            if arg:
                raise InvalidInput(f"Strategy {name} takes no argument")
            return cls(kind)
        if not arg.isdigit():
            raise InvalidInput(f"crash-at-phase needs a phase number, got {text!r}")
        return cls(kind, int(arg))

    @property
    def text(self) -> str:
        if self.kind == StrategyKind.CRASH_AT_PHASE:
            return f"{self.kind.value}:{self.crash_phase}"
        return self.kind.value

    def active_in(self, phase: Phase) -> bool:
        return self.crash_phase is None or phase < self.crash_phase

    def signs(self) -> bool:
        return self.active_in(Phase.SIGNATURES) and self.kind != StrategyKind.WITHHOLD_SIGNATURE

    def posts_epoch(self) -> bool:
        return self.active_in(Phase.SETTLEMENT) and self.kind != StrategyKind.WITHHOLD_EPOCH_POSTS

    def spends(self) -> bool:
        return self.active_in(Phase.SETTLEMENT) and self.kind != StrategyKind.RECEIVER_NO_SPEND


HONEST = AdversaryStrategy()


def honest_strategies(parties: Iterable[str]) -> dict[str, AdversaryStrategy]:
    return {party: HONEST for party in parties}


@dataclass(frozen=True)
class ChannelUpdate:
    """State change of one channel (two balances) or of the factory (one per hub)."""

    edge: str
    before: tuple[int, ...]
    after: tuple[int, ...]
    senders: tuple[str, ...]
    receivers: tuple[str, ...]


@dataclass(frozen=True)
class ChannelUpdateSet:
    updates: tuple[ChannelUpdate, ...]
    timeout: int
    epsilon: int

    @staticmethod
    def _unique(parties: Iterable[str]) -> tuple[str, ...]:
        return tuple(dict.fromkeys(parties))

    @property
    def senders(self) -> tuple[str, ...]:
        return self._unique(s for u in self.updates for s in u.senders)

    @property
    def receivers(self) -> tuple[str, ...]:
        return self._unique(r for u in self.updates for r in u.receivers)

    @property
    def parties(self) -> tuple[str, ...]:
        return self._unique(self.senders + self.receivers)


def build_update_set(topo: Topology, flow: Flow, timeout: int, epsilon: int) -> ChannelUpdateSet:
    """The updates on the support of a flow, channels first, then the factory."""
    if timeout <= 0:
        raise InvalidInput(f"timeout must be > 0, got: {timeout}")
    if epsilon < 0:
        raise InvalidInput(f"epsilon must be >= 0, got: {epsilon}")
    updates = []
    for client, channel in topo.clients.items():
        net = flow.client_net.get(client, 0)
        if net == 0:
            continue
        ends = (client, channel.hub) if net > 0 else (channel.hub, client)
        updates.append(
            ChannelUpdate(
                channel.edge,
                (channel.cap_out, channel.cap_in),
                (channel.cap_out - net, channel.cap_in + net),
                (ends[0],),
                (ends[1],),
            )
        )
    if any(flow.factory_demand):
        balances = topo.factory.balances
        updates.append(
            ChannelUpdate(
                "factory",
                balances,
                tuple(b - f for b, f in zip(balances, flow.factory_demand, strict=True)),
                tuple(h for h, f in zip(topo.hubs, flow.factory_demand, strict=True) if f > 0),
                tuple(h for h, f in zip(topo.hubs, flow.factory_demand, strict=True) if f < 0),
            )
        )
    return ChannelUpdateSet(tuple(updates), timeout, epsilon)


@dataclass(frozen=True)
class EpochTx:
    """Receiver-created transaction whose posting unlocks every payment."""

    creator: str
    outputs: tuple[tuple[str, int], ...]
    signatures: frozenset[str] = frozenset()

    def fully_signed(self, senders: Iterable[str]) -> bool:
        return set(senders) <= self.signatures


@dataclass(frozen=True)
class ExecutionOutcome:
    """Result of one execution. coin_totals holds the total before and after each phase."""

    committed: bool
    final_topology: Topology
    events: tuple[LedgerEvent, ...]
    refunds_issued: bool
    phases: int = PHASES
    coin_totals: tuple[int, ...] = ()


def party_alias(nonce: bytes, party: str) -> str:
    """Ephemeral per-run identity used in ledger events."""
    return hashlib.sha256(nonce + party.encode()).hexdigest()[:ALIAS_LENGTH]


def execute_atomic(
    topo: Topology,
    flow: Flow,
    strategies: Mapping[str, AdversaryStrategy],
    timeout: int,
    epsilon: int,
    ledger: Ledger | None = None,
    alias_nonce: bytes = b"",
) -> ExecutionOutcome:
    """Simulate the four-phase execution of a flow.

    Args:
        topo: State before execution
        flow: Feasible flow to apply
        strategies: Behaviour of every party in the flow's support
        timeout: Heights until unclaimed payments are refunded
        epsilon: Dust output per receiver in each epoch transaction
        ledger: Ledger to start from (a fresh one by default)
        alias_nonce: Per-run nonce for party aliases

    Returns:
        Outcome whose final topology is either topo or apply_flow(topo, flow)

    Raises:
        InfeasibleFlow: If flow does not fit topo
        MissingStrategy: If a party in the support has no strategy
    """
    if not check_flow_feasible(topo, flow):
        raise InfeasibleFlow("Cannot execute a flow that exceeds capacities")
    update_set = build_update_set(topo, flow, timeout, epsilon)
    for party in update_set.parties:
        if party not in strategies:
            raise MissingStrategy(party)

    ledger = ledger or Ledger()
    if not update_set.updates:
        total = topo.total_coins()
        return ExecutionOutcome(True, topo, ledger.posted, False, PHASES, (total,) * (PHASES + 1))

    alias = {p: party_alias(alias_nonce, p) for p in update_set.parties}
    senders, receivers = update_set.senders, update_set.receivers
    deadline = ledger.height + timeout
    stake = epsilon * len(receivers)
    wallets = {r: stake for r in receivers}
    escrow = 0

    def coins(state: Topology) -> int:
        return state.total_coins() + sum(wallets.values()) + escrow

    totals = [coins(topo)]

    epochs = {
        r: EpochTx(r, tuple((x, epsilon) for x in receivers))
        for r in receivers
        if strategies[r].active_in(Phase.EPOCH_CREATION)
    }
    totals.append(coins(topo))

    signers = frozenset(s for s in senders if strategies[s].signs())
    epochs = {r: replace(tx, signatures=signers) for r, tx in epochs.items()}
    for s in senders:
        if s in signers:
            ledger = ledger.post("ack", alias[s], f"{len(epochs)} epoch transactions")
    totals.append(coins(topo))

    payments = []
    for update in update_set.updates:
        for s in update.senders:
            if strategies[s].active_in(Phase.PAYMENTS):
                label = f"payment:{update.edge}:{alias[s]}"
                ledger = ledger.lock(label, alias[s], deadline)
                ledger = ledger.post("payment", alias[s], update.edge)
                payments.append((update, s))
    expected = sum(len(u.senders) for u in update_set.updates)
    totals.append(coins(topo))

    posted = [
        r for r, tx in epochs.items() if tx.fully_signed(senders) and strategies[r].posts_epoch()
    ]
    for r in posted:
        wallets[r] -= stake
        escrow += stake
        ledger = ledger.post("epoch", alias[r], f"{len(receivers)} outputs")
    spent = 0
    if posted:
        for update, s in payments:
            if all(strategies[r].spends() for r in update.receivers):
                spent += 1
                ledger = ledger.post("spend", alias[update.receivers[0]], update.edge)
    committed = bool(posted) and len(payments) == expected and spent == expected

    for r in posted:
        wallets[r] += stake
        escrow -= stake
    if committed:
        final = apply_flow(topo, flow)
        ledger = ledger.settle_all().post("commit", "-", f"{len(update_set.updates)} updates")
        logger.info(f"Committed {len(update_set.updates)} updates")
    else:
        final = topo
        ledger = advance_ledger(ledger, timeout)
        for r in posted:
            ledger = ledger.post("epoch-refund", alias[r], f"{stake} coins")
        logger.warning(
            f"Execution refunded: {len(posted)} epoch posts, {spent}/{expected} payments claimed"
        )
    totals.append(coins(final))

    return ExecutionOutcome(
        committed=committed,
        final_topology=final,
        events=ledger.posted,
        refunds_issued=not committed,
        phases=PHASES,
        coin_totals=tuple(totals),
    )
