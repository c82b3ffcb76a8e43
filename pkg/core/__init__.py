"""Core modules shared across the simulator: domain model, errors and configuration."""

from .base_config import BaseConfig
from .errors import (
    BadK,
    InfeasibleFlow,
    InternalConsistencyError,
    InvalidInput,
    LengthMismatch,
    MissingShare,
    MissingStrategy,
    ScenarioError,
    StateExplosion,
    StructureMismatch,
    TooLarge,
    UnknownNode,
    UnvalidatedInput,
    WiserError,
)
from .pcn import (
    ChannelState,
    DemandVector,
    FactoryState,
    FeeReport,
    Flow,
    Infeasible,
    SequentialResult,
    Topology,
    Transaction,
    aggregate_demand,
    apply_flow,
    check_flow_feasible,
    fee_for_decrease,
    flow_to_demand,
    route_demand,
    sequential_execute,
    transition_fee,
)

__all__ = [
    "BaseConfig",
    "BadK",
    "InfeasibleFlow",
    "InternalConsistencyError",
    "InvalidInput",
    "LengthMismatch",
    "MissingShare",
    "MissingStrategy",
    "ScenarioError",
    "StateExplosion",
    "StructureMismatch",
    "TooLarge",
    "UnknownNode",
    "UnvalidatedInput",
    "WiserError",
    "ChannelState",
    "DemandVector",
    "FactoryState",
    "FeeReport",
    "Flow",
    "Infeasible",
    "SequentialResult",
    "Topology",
    "Transaction",
    "aggregate_demand",
    "apply_flow",
    "check_flow_feasible",
    "fee_for_decrease",
    "flow_to_demand",
    "route_demand",
    "sequential_execute",
    "transition_fee",
]
