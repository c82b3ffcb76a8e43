"""Seeded random topologies, transaction lists and benchmark instances."""

import logging

import numpy as np

from core.pcn import ChannelState, FactoryState, Topology, Transaction
from protocol.config import SEED_BYTES, ProtocolConfig

from .scenario import Scenario

logger = logging.getLogger(__name__)

MAX_PPM = 200_000


def hub_id(i: int) -> str:
    return f"h{i + 1}"


def client_id(i: int) -> str:
    return f"c{i + 1}"


def random_topology(
    rng: np.random.Generator,
    num_hubs: int,
    clients_per_hub: int = 2,
    max_balance: int = 30,
    max_capacity: int = 30,
    with_fees: bool = False,
) -> Topology:
    """Factory of num_hubs hubs, each with clients_per_hub clients.

    Balances and capacities are uniform in [0, max]; fees, when enabled, use
    a base in [0, 3] and a proportional part below MAX_PPM.
    """
    hubs = [hub_id(i) for i in range(num_hubs)]

    def fees(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if not with_fees:
            return (0,) * n, (0,) * n
        base = rng.integers(0, 3, size=n, endpoint=True)
        ppm = rng.integers(0, MAX_PPM, size=n)
        return tuple(int(v) for v in base), tuple(int(v) for v in ppm)

    base, ppm = fees(num_hubs)
    balances = tuple(int(v) for v in rng.integers(0, max_balance, size=num_hubs, endpoint=True))
    factory = FactoryState(tuple(hubs), balances, base, ppm)

    num_clients = num_hubs * clients_per_hub
    caps = rng.integers(0, max_capacity, size=(num_clients, 2), endpoint=True)
    client_base, client_ppm = fees(num_clients)
    clients = {}
    for i in range(num_clients):
        cid = client_id(i)
        clients[cid] = ChannelState(
            cid,
            hubs[i % num_hubs],
            int(caps[i, 0]),
            int(caps[i, 1]),
            client_base[i],
            client_ppm[i],
        )
    return Topology(factory, clients)


def random_transactions(
    rng: np.random.Generator,
    topo: Topology,
    count: int,
    max_amount: int = 9,
    min_amount: int = 1,
    prefix: str = "t",
) -> list[Transaction]:
    """count transactions between distinct uniform nodes, amounts uniform in [min, max]."""
    nodes = topo.nodes()
    txns = []
    for j in range(count):
        sender, recipient = rng.choice(len(nodes), size=2, replace=False)
        amount = int(rng.integers(min_amount, max_amount, endpoint=True))
        txns.append(Transaction(f"{prefix}{j:03d}", nodes[sender], nodes[recipient], amount))
    return txns


def random_instance(
    rng: np.random.Generator,
    hub_counts: tuple[int, ...] = (2, 3, 4),
    max_txns: int = 14,
    max_amount: int = 9,
    max_balance: int = 30,
    clients_per_hub: int = 2,
    with_fees: bool = False,
) -> tuple[Topology, list[Transaction]]:
    """A topology and transaction list drawn with the fuzzing conventions."""
    num_hubs = int(rng.choice(hub_counts))
    topo = random_topology(
        rng,
        num_hubs,
        clients_per_hub=clients_per_hub,
        max_balance=max_balance,
        max_capacity=max_balance,
        with_fees=with_fees,
    )
    count = int(rng.integers(0, max_txns, endpoint=True))
    return topo, random_transactions(rng, topo, count, max_amount)


def random_scenario(
    seed: int,
    hub_counts: tuple[int, ...] = (2, 3, 4),
    max_txns: int = 14,
    max_amount: int = 9,
    max_balance: int = 30,
    with_fees: bool = True,
    solver: str = "dp",
) -> Scenario:
    """A complete scenario, delegates and seed included, derived from one integer seed."""
    rng = np.random.default_rng(seed)
    topo, txns = random_instance(
        rng,
        hub_counts=hub_counts,
        max_txns=max_txns,
        max_amount=max_amount,
        max_balance=max_balance,
        with_fees=with_fees,
    )
    counts: dict[str, int] = {}
    for txn in txns:
        counts[txn.sender] = counts.get(txn.sender, 0) + 1
    config = ProtocolConfig(
        num_delegates=int(rng.integers(1, len(topo.hubs), endpoint=True)),
        randomness_seed=rng.bytes(SEED_BYTES),
        pad_to=max(counts.values(), default=0),
        solver=solver,
    )
    return Scenario(topo, tuple(txns), config)


def bench_instance(
    num_hubs: int, delta: int, k: int, seed: int, margin: int | None = None
) -> tuple[Topology, list[Transaction]]:
    """Benchmark instance with one client per hub.

    Amounts are uniform in [1, delta] and sender and recipient hubs are
    uniform and distinct. Client channels never bind. Each hub's factory
    balance is its net outflow when every transaction is selected, less
    margin (delta by default), floored at zero.
    """
    rng = np.random.default_rng(seed)
    margin = delta if margin is None else margin
    amounts = rng.integers(1, delta, size=k, endpoint=True)
    senders = rng.integers(0, num_hubs, size=k)
    offsets = rng.integers(1, num_hubs, size=k)
    recipients = (senders + offsets) % num_hubs

    net = np.zeros(num_hubs, dtype=np.int64)
    np.add.at(net, senders, amounts)
    np.subtract.at(net, recipients, amounts)
    balances = tuple(int(v) for v in np.maximum(net - margin, 0))

    hubs = tuple(hub_id(i) for i in range(num_hubs))
    ample = int(amounts.sum()) + 1
    clients = {
        client_id(i): ChannelState(client_id(i), hubs[i], ample, ample) for i in range(num_hubs)
    }
    topo = Topology(FactoryState.uniform_fees(hubs, balances), clients)
    txns = [
        Transaction(f"t{j:06d}", client_id(int(s)), client_id(int(r)), int(a))
        for j, (s, r, a) in enumerate(zip(senders, recipients, amounts, strict=True))
    ]
    logger.debug(f"Bench instance h={num_hubs} delta={delta} k={k} seed={seed}: {balances}")
    return topo, txns
