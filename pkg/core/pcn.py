"""Domain model for the hub-and-client channel topology.

Hubs share one channel factory; every client holds exactly one channel, to
its hub. All amounts are integer coins and every operation here is a pure
function returning new values.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace

from .errors import InfeasibleFlow, InvalidInput, StructureMismatch, UnknownNode

logger = logging.getLogger(__name__)

PPM = 1_000_000


def _check_amount(name: str, value: object) -> None:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InvalidInput(f"{name} must be a non-negative integer, got: {value!r}")


def _check_ppm(name: str, value: object) -> None:
    _check_amount(name, value)
    if value >= PPM:  # type: ignore[operator]
        raise InvalidInput(f"{name} must be below {PPM}, got: {value}")


def channel_edge(client: str) -> str:
    """Edge id of the channel between a client and its hub."""
    return f"channel:{client}"


def factory_edge(hub: str) -> str:
    """Edge id of a hub's position in the channel factory."""
    return f"factory:{hub}"


@dataclass(frozen=True)
class ChannelState:
    """A client's channel to its hub.

    cap_out is spendable by the client towards the hub, cap_in by the hub
    towards the client.
    """

    client: str
    hub: str
    cap_out: int
    cap_in: int
    fee_base: int = 0
    fee_prop_ppm: int = 0

    def __post_init__(self):
        if self.client == self.hub:
            raise InvalidInput(f"Client {self.client} cannot be its own hub")
        _check_amount(f"cap_out of {self.client}", self.cap_out)
        _check_amount(f"cap_in of {self.client}", self.cap_in)
        _check_amount(f"fee_base of {self.client}", self.fee_base)
        _check_ppm(f"fee_prop_ppm of {self.client}", self.fee_prop_ppm)

    @property
    def total(self) -> int:
        return self.cap_out + self.cap_in

    @property
    def edge(self) -> str:
        return channel_edge(self.client)


@dataclass(frozen=True)
class FactoryState:
    """Balances and fee parameters of the hubs' channel factory."""

    hubs: tuple[str, ...]
    balances: tuple[int, ...]
    fee_base: tuple[int, ...]
    fee_prop_ppm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "hubs", tuple(self.hubs))
        object.__setattr__(self, "balances", tuple(self.balances))
        object.__setattr__(self, "fee_base", tuple(self.fee_base))
        object.__setattr__(self, "fee_prop_ppm", tuple(self.fee_prop_ppm))
        if not self.hubs:
            raise InvalidInput("A channel factory needs at least one hub")
        if len(set(self.hubs)) != len(self.hubs):
            raise InvalidInput(f"Duplicate hub ids in {list(self.hubs)}")
        size = len(self.hubs)
        if not len(self.balances) == len(self.fee_base) == len(self.fee_prop_ppm) == size:
            raise InvalidInput("Factory balances and fee vectors must have one entry per hub")
        for hub, balance, base, ppm in zip(
            self.hubs, self.balances, self.fee_base, self.fee_prop_ppm, strict=True
        ):
            _check_amount(f"factory balance of {hub}", balance)
            _check_amount(f"fee_base of {hub}", base)
            _check_ppm(f"fee_prop_ppm of {hub}", ppm)

    @classmethod
    def uniform_fees(cls, hubs: Sequence[str], balances: Sequence[int]) -> "FactoryState":
        """Factory with zero fees everywhere."""
        zeros = (0,) * len(hubs)
        return cls(tuple(hubs), tuple(balances), zeros, zeros)

    @property
    def total(self) -> int:
        return sum(self.balances)

    def index(self, hub: str) -> int:
        try:
            return self.hubs.index(hub)
        except ValueError:
            raise UnknownNode(hub, "not a hub") from None


@dataclass(frozen=True)
class Topology:
    """The restricted network: one factory plus single-channel clients."""

    factory: FactoryState
    clients: Mapping[str, ChannelState] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "clients", dict(self.clients))
        hubs = set(self.factory.hubs)
        for client_id, channel in self.clients.items():
            if client_id != channel.client:
                raise InvalidInput(f"Channel keyed {client_id} belongs to {channel.client}")
            if client_id in hubs:
                raise InvalidInput(f"Node {client_id} cannot be both hub and client")
            if channel.hub not in hubs:
                raise UnknownNode(channel.hub, f"hub of client {client_id}")

    @property
    def hubs(self) -> tuple[str, ...]:
        return self.factory.hubs

    def nodes(self) -> tuple[str, ...]:
        """Hubs in factory order followed by clients in insertion order."""
        return self.factory.hubs + tuple(self.clients)

    def is_hub(self, node: str) -> bool:
        return node in self.factory.hubs

    def has_node(self, node: str) -> bool:
        return node in self.clients or node in self.factory.hubs

    def hub_of(self, node: str) -> str:
        """The hub a node routes through; a hub routes through itself."""
        channel = self.clients.get(node)
        if channel is not None:
            return channel.hub
        if node in self.factory.hubs:
            return node
        raise UnknownNode(node)

    def clients_of(self, hub: str) -> list[str]:
        return [c for c, ch in self.clients.items() if ch.hub == hub]

    def total_coins(self) -> int:
        return self.factory.total + sum(ch.total for ch in self.clients.values())


@dataclass(frozen=True)
class Transaction:
    """A payment of amount coins from sender to recipient."""

    id: str
    sender: str
    recipient: str
    amount: int

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise InvalidInput(f"Transaction id must be a non-empty string, got: {self.id!r}")
        if self.sender == self.recipient:
            raise InvalidInput(f"Transaction {self.id} pays its own sender {self.sender}")
        _check_amount(f"amount of {self.id}", self.amount)


@dataclass(frozen=True)
class DemandVector:
    """Signed net outflow per node; absent nodes are zero."""

    entries: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", {n: v for n, v in self.entries.items() if v != 0})

    def __getitem__(self, node: str) -> int:
        return self.entries.get(node, 0)

    def __add__(self, other: "DemandVector") -> "DemandVector":
        merged = dict(self.entries)
        for node, value in other.entries.items():
            merged[node] = merged.get(node, 0) + value
        return DemandVector(merged)

    def is_balanced(self) -> bool:
        return sum(self.entries.values()) == 0

    def vector(self, order: Sequence[str]) -> tuple[int, ...]:
        """Entries laid out in the given node order."""
        return tuple(self[node] for node in order)


@dataclass(frozen=True)
class Flow:
    """Net channel transfers plus a factory state transition.

    client_net is positive when the client pays its hub. factory_demand is
    the signed decrease of each hub's factory balance, in hub order.
    """

    client_net: Mapping[str, int] = field(default_factory=dict)
    factory_demand: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "client_net", {c: v for c, v in self.client_net.items() if v != 0}
        )
        object.__setattr__(self, "factory_demand", tuple(self.factory_demand))

    @classmethod
    def zero(cls, topo: Topology) -> "Flow":
        return cls({}, (0,) * len(topo.hubs))

    def is_zero(self) -> bool:
        return not self.client_net and not any(self.factory_demand)

    def is_balanced(self) -> bool:
        return sum(self.factory_demand) == 0

    def edge_values(self, topo: Topology) -> dict[str, int]:
        """Every edge of the topology mapped to its flow value, zeros included."""
        values = {channel_edge(c): self.client_net.get(c, 0) for c in topo.clients}
        for hub, demand in zip(topo.hubs, self.factory_demand, strict=False):
            values[factory_edge(hub)] = demand
        return values


@dataclass(frozen=True)
class FeeReport:
    """Forwarding fees of one state transition."""

    per_channel: Mapping[str, int] = field(default_factory=dict)
    factory: int = 0

    def __post_init__(self):
        object.__setattr__(self, "per_channel", {k: v for k, v in self.per_channel.items() if v})

    @property
    def total(self) -> int:
        return self.factory + sum(self.per_channel.values())

    def __add__(self, other: "FeeReport") -> "FeeReport":
        merged = dict(self.per_channel)
        for edge, fee in other.per_channel.items():
            merged[edge] = merged.get(edge, 0) + fee
        return FeeReport(merged, self.factory + other.factory)


@dataclass(frozen=True)
class Infeasible:
    """The first capacity constraint a demand or transaction list violates."""

    reason: str
    node: str | None = None
    index: int | None = None


@dataclass(frozen=True)
class SequentialResult:
    final: Topology
    fees: FeeReport


def aggregate_demand(txns: Iterable[Transaction]) -> DemandVector:
    """Sum the demand vectors of a transaction list."""
    entries: dict[str, int] = {}
    for txn in txns:
        entries[txn.sender] = entries.get(txn.sender, 0) + txn.amount
        entries[txn.recipient] = entries.get(txn.recipient, 0) - txn.amount
    return DemandVector(entries)


def route_demand(topo: Topology, d: DemandVector) -> Flow | Infeasible:
    """Route a demand vector through the unique canonical flow.

    Args:
        topo: Network to route on
        d: Balanced demand vector

    Returns:
        The routing flow, or the first violated constraint (clients in
        insertion order, then hubs in factory order)

    Raises:
        UnknownNode: If d references a node outside topo
        InvalidInput: If d does not sum to zero
    """
    for node in d.entries:
        if not topo.has_node(node):
            raise UnknownNode(node)
    if not d.is_balanced():
        raise InvalidInput(f"Demand vector sums to {sum(d.entries.values())}, not zero")

    demand = {hub: d[hub] for hub in topo.hubs}
    client_net: dict[str, int] = {}
    for client, channel in topo.clients.items():
        net = d[client]
        if net == 0:
            continue
        client_net[client] = net
        demand[channel.hub] += net

    for client, net in client_net.items():
        channel = topo.clients[client]
        if net > channel.cap_out:
            return Infeasible("cap_out", client)
        if -net > channel.cap_in:
            return Infeasible("cap_in", client)
    for hub, balance in zip(topo.hubs, topo.factory.balances, strict=True):
        if demand[hub] > balance:
            return Infeasible("factory", hub)

    return Flow(client_net, tuple(demand[hub] for hub in topo.hubs))


def flow_to_demand(topo: Topology, f: Flow) -> DemandVector:
    """Recover the demand vector a flow routes from the net-flow equation."""
    _check_flow_structure(topo, f)
    entries = dict(f.client_net)
    for hub, demand in zip(topo.hubs, f.factory_demand, strict=True):
        entries[hub] = demand - sum(f.client_net.get(c, 0) for c in topo.clients_of(hub))
    return DemandVector(entries)


def _check_flow_structure(topo: Topology, f: Flow) -> None:
    for client in f.client_net:
        if client not in topo.clients:
            raise UnknownNode(client, "flow entry is not a client channel")
    if len(f.factory_demand) != len(topo.hubs):
        raise StructureMismatch(
            f"Flow has {len(f.factory_demand)} factory entries for {len(topo.hubs)} hubs"
        )


def check_flow_feasible(topo: Topology, f: Flow) -> bool:
    """Whether every entry of f fits its directed capacity.

    An unbalanced factory transition is never feasible.
    """
    _check_flow_structure(topo, f)
    if not f.is_balanced():
        return False
    for client, net in f.client_net.items():
        channel = topo.clients[client]
        if net > channel.cap_out or -net > channel.cap_in:
            return False
    return all(
        demand <= balance
        for demand, balance in zip(f.factory_demand, topo.factory.balances, strict=True)
    )


def apply_flow(topo: Topology, f: Flow) -> Topology:
    """Shift balances by a feasible flow.

    Raises:
        InfeasibleFlow: If f does not fit topo
    """
    if not check_flow_feasible(topo, f):
        raise InfeasibleFlow("Flow exceeds the capacities of the topology")
    clients = {
        client: replace(
            channel,
            cap_out=channel.cap_out - f.client_net.get(client, 0),
            cap_in=channel.cap_in + f.client_net.get(client, 0),
        )
        for client, channel in topo.clients.items()
    }
    balances = tuple(
        balance - demand
        for balance, demand in zip(topo.factory.balances, f.factory_demand, strict=True)
    )
    return Topology(replace(topo.factory, balances=balances), clients)


def fee_for_decrease(fee_base: int, fee_prop_ppm: int, delta: int) -> int:
    """Fee a forwarding party charges for a balance decrease of delta coins."""
    if delta <= 0:
        return 0
    return fee_base + -(-fee_prop_ppm * delta // PPM)


def _check_same_structure(before: Topology, after: Topology) -> None:
    if before.hubs != after.hubs:
        raise StructureMismatch("Topologies have different hubs")
    if (before.factory.fee_base, before.factory.fee_prop_ppm) != (
        after.factory.fee_base,
        after.factory.fee_prop_ppm,
    ):
        raise StructureMismatch("Factory fee parameters differ")
    if before.factory.total != after.factory.total:
        raise StructureMismatch(
            f"Factory total changed from {before.factory.total} to {after.factory.total}"
        )
    if set(before.clients) != set(after.clients):
        raise StructureMismatch("Topologies have different clients")
    for client, old in before.clients.items():
        new = after.clients[client]
        if (old.hub, old.total, old.fee_base, old.fee_prop_ppm) != (
            new.hub,
            new.total,
            new.fee_base,
            new.fee_prop_ppm,
        ):
            raise StructureMismatch(f"Channel of {client} changed structure")


def transition_fee(before: Topology, after: Topology) -> FeeReport:
    """Fees charged for moving from one state to another.

    A hub charges on a client channel when its own side (cap_in) shrinks,
    and on the factory when its factory balance shrinks.

    Raises:
        StructureMismatch: If the two states do not share nodes and totals
    """
    _check_same_structure(before, after)
    per_channel = {}
    for client, old in before.clients.items():
        delta = old.cap_in - after.clients[client].cap_in
        per_channel[old.edge] = fee_for_decrease(old.fee_base, old.fee_prop_ppm, delta)
    factory = sum(
        fee_for_decrease(base, ppm, old - new)
        for base, ppm, old, new in zip(
            before.factory.fee_base,
            before.factory.fee_prop_ppm,
            before.factory.balances,
            after.factory.balances,
            strict=True,
        )
    )
    return FeeReport(per_channel, factory)


def sequential_execute(
    topo: Topology, txns: Sequence[Transaction]
) -> SequentialResult | Infeasible:
    """Execute transactions one at a time, accumulating fees.

    Returns:
        Final state and total fees, or the first transaction that does not fit
    """
    current = topo
    fees = FeeReport()
    for index, txn in enumerate(txns):
        routed = route_demand(current, aggregate_demand([txn]))
        if isinstance(routed, Infeasible):
            logger.debug(f"Sequential execution stops at {txn.id} ({routed.reason})")
            return Infeasible(routed.reason, routed.node, index)
        after = apply_flow(current, routed)
        fees = fees + transition_fee(current, after)
        current = after
    return SequentialResult(current, fees)
