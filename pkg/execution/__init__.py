"""Simulated ledger and atomic execution of aggregated flows."""

from .atomic import (
    HONEST,
    PHASES,
    AdversaryStrategy,
    ChannelUpdate,
    ChannelUpdateSet,
    EpochTx,
    ExecutionOutcome,
    Phase,
    StrategyKind,
    build_update_set,
    execute_atomic,
    honest_strategies,
    party_alias,
)
from .ledger import Ledger, LedgerEvent, Timelock, advance_ledger

__all__ = [
    "HONEST",
    "PHASES",
    "AdversaryStrategy",
    "ChannelUpdate",
    "ChannelUpdateSet",
    "EpochTx",
    "ExecutionOutcome",
    "Phase",
    "StrategyKind",
    "build_update_set",
    "execute_atomic",
    "honest_strategies",
    "party_alias",
    "Ledger",
    "LedgerEvent",
    "Timelock",
    "advance_ledger",
]
