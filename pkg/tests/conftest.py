"""Shared pytest fixtures for the aggregation simulator tests."""

from pathlib import Path

import pytest

from core.pcn import ChannelState, FactoryState, Topology, Transaction
from protocol.config import ProtocolConfig

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def make_topology(
    hubs: dict[str, int],
    clients: dict[str, tuple[str, int, int]] | None = None,
    fee_base: int = 0,
    fee_prop_ppm: int = 0,
) -> Topology:
    """Topology from {hub: balance} and {client: (hub, cap_out, cap_in)} with uniform fees."""
    ids = tuple(hubs)
    factory = FactoryState(
        ids,
        tuple(hubs.values()),
        (fee_base,) * len(ids),
        (fee_prop_ppm,) * len(ids),
    )
    channels = {
        c: ChannelState(c, hub, cap_out, cap_in, fee_base, fee_prop_ppm)
        for c, (hub, cap_out, cap_in) in (clients or {}).items()
    }
    return Topology(factory, channels)


def txn(txn_id: str, sender: str, recipient: str, amount: int) -> Transaction:
    return Transaction(txn_id, sender, recipient, amount)


# =============================================================================
# Environment Fixtures
# =============================================================================


@pytest.fixture
def clean_env(monkeypatch):
    """Clean environment of all simulator-related variables."""
    env_vars = [
        "LOG_LEVEL",
        "WISER_STATE_LIMIT",
        "WISER_BRUTE_FORCE_LIMIT",
        "WISER_SOLVER",
        "WISER_RADIUS",
        "WISER_FALLBACK_SOLVER",
        "WISER_TIMEOUT",
        "WISER_EPSILON",
        "WISER_MAX_BENCH_HUBS",
    ]
    for var in env_vars:
        # setenv first so teardown also removes values a .env file loads later
        monkeypatch.setenv(var, "")
        monkeypatch.delenv(var)
    return monkeypatch


@pytest.fixture
def env_file(tmp_path):
    """Write a .env file from keyword settings and return its path."""

    def write(**settings: str) -> str:
        path = tmp_path / "test.env"
        path.write_text("".join(f"{k}={v}\n" for k, v in settings.items()))
        return str(path)

    return write


# =============================================================================
# Topology Fixtures
# =============================================================================


@pytest.fixture
def crossing_topology() -> Topology:
    """Two hubs with empty factory balances and four clients."""
    return make_topology(
        {"v3": 0, "v6": 0},
        {
            "v1": ("v6", 25, 5),
            "v2": ("v3", 5, 5),
            "v4": ("v3", 15, 5),
            "v5": ("v6", 5, 5),
        },
    )


@pytest.fixture
def crossing_transactions() -> list[Transaction]:
    """Two v1 -> v3 payments and one v4 -> v6 payment of 10 coins each."""
    return [
        txn("t1", "v1", "v3", 10),
        txn("t2", "v1", "v3", 10),
        txn("t3", "v4", "v6", 10),
    ]


@pytest.fixture
def demand_topology() -> Topology:
    """Hubs v3, v4 and clients v1, v2 (hub v3) and v5 (hub v4)."""
    return make_topology(
        {"v3": 10, "v4": 10},
        {"v1": ("v3", 10, 10), "v2": ("v3", 10, 10), "v5": ("v4", 10, 10)},
    )


@pytest.fixture
def two_hub_topology() -> Topology:
    """Hubs h1, h2 with balance 10 and one roomy client each."""
    return make_topology({"h1": 10, "h2": 10}, {"c1": ("h1", 20, 20), "c2": ("h2", 20, 20)})


@pytest.fixture
def three_transactions() -> list[Transaction]:
    """7 and 6 from c1 to c2, 5 back."""
    return [txn("t1", "c1", "c2", 7), txn("t2", "c1", "c2", 6), txn("t3", "c2", "c1", 5)]


@pytest.fixture
def fee_topology() -> Topology:
    """Two hubs and two clients, every party charging 1 + 1%."""
    return make_topology(
        {"h1": 10, "h2": 10},
        {"c1": ("h1", 20, 20), "c2": ("h2", 20, 20)},
        fee_base=1,
        fee_prop_ppm=10_000,
    )


# =============================================================================
# Protocol Fixtures
# =============================================================================


@pytest.fixture
def protocol_config() -> ProtocolConfig:
    """Two delegates, zero seed, lists padded to 3."""
    return ProtocolConfig(num_delegates=2, pad_to=3)


# =============================================================================
# Scenario File Fixtures
# =============================================================================


@pytest.fixture
def crossing_path() -> Path:
    return SCENARIO_DIR / "crossing.json"


@pytest.fixture
def three_txn_path() -> Path:
    return SCENARIO_DIR / "three_txn.json"
