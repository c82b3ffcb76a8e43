"""Scenario documents: topology, transactions, run parameters and adversary map."""

import json
import logging
import sys
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from core.errors import InvalidInput, ScenarioError, UnknownNode
from core.pcn import ChannelState, FactoryState, Topology, Transaction
from execution.atomic import AdversaryStrategy
from protocol.config import SEED_BYTES, ProtocolConfig
from solvers import SOLVERS

from .config import CliConfig

logger = logging.getLogger(__name__)

STDIN_PATH = "-"
_MISSING = object()


@dataclass(frozen=True)
class Scenario:
    topology: Topology
    transactions: tuple[Transaction, ...]
    config: ProtocolConfig
    adversary: Mapping[str, AdversaryStrategy] = field(default_factory=dict)


def _field(obj: Mapping[str, Any], key: str, where: str, default: Any = _MISSING) -> Any:
    if not isinstance(obj, Mapping):
        raise ScenarioError(f"{where} must be an object")
    if key in obj:
        return obj[key]
    if default is _MISSING:
        raise ScenarioError(f"{where} is missing {key!r}")
    return default


def _list(obj: Mapping[str, Any], key: str, where: str) -> list:
    value = _field(obj, key, where, [])
    if not isinstance(value, list):
        raise ScenarioError(f"{where}.{key} must be a list")
    return value


def parse_seed(seed_hex: Any) -> bytes:
    """Decode a 64-character hex seed.

    Raises:
        ScenarioError: If the text is not 32 bytes of hex
    """
    if not isinstance(seed_hex, str) or len(seed_hex) != 2 * SEED_BYTES:
        raise ScenarioError(f"seed_hex must be {2 * SEED_BYTES} hex characters")
    try:
        seed = bytes.fromhex(seed_hex)
    except ValueError:
        raise ScenarioError(f"seed_hex is not hexadecimal: {seed_hex!r}") from None
    if len(seed) != SEED_BYTES:
        raise ScenarioError(f"seed_hex must encode {SEED_BYTES} bytes")
    return seed


def _longest_list(txns: tuple[Transaction, ...]) -> int:
    counts: dict[str, int] = {}
    for txn in txns:
        counts[txn.sender] = counts.get(txn.sender, 0) + 1
    return max(counts.values(), default=0)


def parse_scenario(data: Any, defaults: CliConfig | None = None) -> Scenario:
    """Build a scenario from a decoded JSON document.

    Missing config values fall back to defaults: every hub is a delegate,
    pad_to is the longest submitted list and the seed is all zeros.

    Raises:
        ScenarioError: If the document is malformed or not referentially intact
    """
    try:
        return _parse(data, defaults)
    except ScenarioError:
        raise
    except (InvalidInput, UnknownNode, TypeError) as e:
        raise ScenarioError(f"Invalid scenario: {e}") from e


def _parse(data: Any, defaults: CliConfig | None) -> Scenario:
    hubs = _list(data, "hubs", "scenario")
    factory = FactoryState(
        tuple(_field(h, "id", "hub") for h in hubs),
        tuple(_field(h, "factory_balance", "hub") for h in hubs),
        tuple(_field(h, "fee_base", "hub", 0) for h in hubs),
        tuple(_field(h, "fee_prop_ppm", "hub", 0) for h in hubs),
    )
    clients = {}
    for c in _list(data, "clients", "scenario"):
        channel = ChannelState(
            client=_field(c, "id", "client"),
            hub=_field(c, "hub", "client"),
            cap_out=_field(c, "cap_out", "client"),
            cap_in=_field(c, "cap_in", "client"),
            fee_base=_field(c, "fee_base", "client", 0),
            fee_prop_ppm=_field(c, "fee_prop_ppm", "client", 0),
        )
        if channel.client in clients:
            raise ScenarioError(f"Duplicate client id {channel.client}")
        clients[channel.client] = channel
    topology = Topology(factory, clients)

    txns = tuple(
        Transaction(
            _field(t, "id", "transaction"),
            _field(t, "sender", "transaction"),
            _field(t, "recipient", "transaction"),
            _field(t, "amount", "transaction"),
        )
        for t in _list(data, "transactions", "scenario")
    )
    ids = [t.id for t in txns]
    if len(set(ids)) != len(ids):
        raise ScenarioError("Transaction ids must be unique")
    for txn in txns:
        for node in (txn.sender, txn.recipient):
            if not topology.has_node(node):
                raise ScenarioError(f"Transaction {txn.id} references unknown node {node}")

    raw = _field(data, "config", "scenario", {})
    defaults = defaults or CliConfig()
    config = ProtocolConfig(
        num_delegates=_field(raw, "num_delegates", "config", len(factory.hubs)),
        randomness_seed=parse_seed(_field(raw, "seed_hex", "config", "0" * 2 * SEED_BYTES)),
        pad_to=_field(raw, "pad_to", "config", _longest_list(txns)),
        solver=_field(raw, "solver", "config", defaults.solver),
        radius=_field(raw, "radius", "config", defaults.radius),
        timeout=_field(raw, "timeout", "config", defaults.timeout),
        epsilon=_field(raw, "epsilon", "config", defaults.epsilon),
        fallback=_field(raw, "fallback", "config", defaults.fallback_solver),
        state_limit=defaults.state_limit,
        brute_force_limit=defaults.brute_force_limit,
    )
    for name in ("num_delegates", "pad_to", "timeout", "epsilon"):
        value = getattr(config, name)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"config.{name} must be an integer, got: {value!r}")
    if config.radius is not None and (
        isinstance(config.radius, bool) or not isinstance(config.radius, int)
    ):
        raise ScenarioError(f"config.radius must be an integer, got: {config.radius!r}")
    for name in ("solver", "fallback"):
        choice = getattr(config, name)
        if choice is not None and choice not in SOLVERS:
            raise ScenarioError(f"config.{name} must be one of {', '.join(SOLVERS)}")
    if config.pad_to < _longest_list(txns):
        raise ScenarioError(f"config.pad_to {config.pad_to} is shorter than a submitted list")

    adversary_raw = _field(data, "adversary", "scenario", {})
    if not isinstance(adversary_raw, Mapping):
        raise ScenarioError("adversary must be an object")
    adversary = {}
    for party, text in adversary_raw.items():
        if not topology.has_node(party):
            raise ScenarioError(f"Adversary entry for unknown node {party}")
        if not isinstance(text, str):
            raise ScenarioError(f"Strategy of {party} must be a string")
        adversary[party] = AdversaryStrategy.parse(text)

    return Scenario(topology, txns, config, adversary)


def dump_scenario(scenario: Scenario) -> dict[str, Any]:
    """The JSON document parse_scenario reads back to an equal scenario."""
    topo, config = scenario.topology, scenario.config
    factory = topo.factory
    doc: dict[str, Any] = {
        "hubs": [
            {"id": h, "factory_balance": b, "fee_base": base, "fee_prop_ppm": ppm}
            for h, b, base, ppm in zip(
                factory.hubs, factory.balances, factory.fee_base, factory.fee_prop_ppm, strict=True
            )
        ],
        "clients": [
            {
                "id": ch.client,
                "hub": ch.hub,
                "cap_out": ch.cap_out,
                "cap_in": ch.cap_in,
                "fee_base": ch.fee_base,
                "fee_prop_ppm": ch.fee_prop_ppm,
            }
            for ch in topo.clients.values()
        ],
        "transactions": [
            {"id": t.id, "sender": t.sender, "recipient": t.recipient, "amount": t.amount}
            for t in scenario.transactions
        ],
        "config": {
            "num_delegates": config.num_delegates,
            "seed_hex": config.seed_hex,
            "pad_to": config.pad_to,
            "solver": config.solver,
            "timeout": config.timeout,
            "epsilon": config.epsilon,
        },
    }
    if config.radius is not None:
        doc["config"]["radius"] = config.radius
    if config.fallback is not None:
        doc["config"]["fallback"] = config.fallback
    if scenario.adversary:
        doc["adversary"] = {p: s.text for p, s in scenario.adversary.items()}
    return doc


def read_document(path: str) -> Any:
    """Decode a JSON file, or standard input when path is "-".

    Raises:
        ScenarioError: If the file cannot be read or is not JSON
    """
    try:
        if path == STDIN_PATH:
            text = sys.stdin.read()
        else:
            text = Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except OSError as e:
        raise ScenarioError(f"Cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path} is not valid JSON: {e}") from e


def load_scenario(path: str, defaults: CliConfig | None = None) -> Scenario:
    scenario = parse_scenario(read_document(path), defaults)
    logger.info(
        f"Loaded scenario {path}: {len(scenario.topology.hubs)} hubs, "
        f"{len(scenario.topology.clients)} clients, {len(scenario.transactions)} transactions"
    )
    return scenario


def to_json(doc: Any) -> str:
    """Stable encoding shared by scenarios and reports."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
