"""Subset-sum instances encoded as two-hub aggregation problems."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from core.errors import InvalidInput
from core.pcn import FactoryState, Topology, Transaction

logger = logging.getLogger(__name__)

SOURCE_HUB = "h1"
SINK_HUB = "h2"
TARGET_ID = "target"


@dataclass(frozen=True)
class ReducedInstance:
    topology: Topology
    txns: tuple[Transaction, ...]


def item_id(index: int) -> str:
    return f"item-{index:03d}"


def subset_sum_reduce(target: int, items: Sequence[int]) -> ReducedInstance:
    """Encode "does a subset of items sum to target" as an aggregation instance.

    Both hubs start with zero factory balance, so only a perfectly netted
    selection is feasible. Each item is paid h1 -> h2 and the target h2 -> h1;
    a nonzero optimum exists exactly when some items add up to target.

    Raises:
        InvalidInput: If target is not positive, items is empty, or an item
            is not a positive integer
    """
    if isinstance(target, bool) or not isinstance(target, int) or target <= 0:
        raise InvalidInput(f"target must be a positive integer, got: {target!r}")
    if not items:
        raise InvalidInput("items must not be empty")
    for value in items:
        if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
            raise InvalidInput(f"items must be positive integers, got: {value!r}")

    topology = Topology(FactoryState.uniform_fees((SOURCE_HUB, SINK_HUB), (0, 0)))
    txns = [Transaction(item_id(i), SOURCE_HUB, SINK_HUB, a) for i, a in enumerate(items)]
    txns.append(Transaction(TARGET_ID, SINK_HUB, SOURCE_HUB, target))
    logger.debug(f"Reduced subset-sum target {target} over {len(items)} items")
    return ReducedInstance(topology, tuple(txns))
