"""Exceptions raised by the aggregation simulator.

Domain outcomes that are expected during normal operation (an infeasible
demand vector, a failed local validation, a refunded execution) are returned
as values. Exceptions are reserved for malformed input, guard trips and
internal defects.
"""


class WiserError(Exception):
    """Base class for all simulator errors."""


class InvalidInput(WiserError, ValueError):
    """A value violates a documented precondition."""


class ScenarioError(InvalidInput):
    """A scenario or report document could not be parsed."""


class UnknownNode(WiserError):
    """A node id does not exist in the topology."""

    def __init__(self, node: str, detail: str = ""):
        message = f"Unknown node: {node}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.node = node


class InfeasibleFlow(WiserError):
    """A flow does not fit the capacities it is applied to."""


class StructureMismatch(WiserError):
    """Two topologies or a topology and a flow do not share structure."""


class UnvalidatedInput(WiserError):
    """Transactions were handed to the solver without passing input validation."""

    def __init__(self, node: str, direction: str, total: int, capacity: int):
        super().__init__(
            f"Client {node} submitted {direction} total {total} above capacity {capacity}"
        )
        self.node = node
        self.direction = direction


class TooLarge(WiserError):
    """An instance exceeds the brute-force enumeration limit."""

    def __init__(self, k: int, limit: int):
        super().__init__(f"Brute force limited to {limit} transactions, got {k}")
        self.k = k
        self.limit = limit


class StateExplosion(WiserError):
    """The dynamic program exceeded its state budget."""

    def __init__(self, states: int, limit: int):
        super().__init__(
            f"Dynamic program needs {states} states, limit is {limit}; "
            "use --solver greedy or --solver dp-bounded --radius N"
        )
        self.states = states
        self.limit = limit


class BadK(InvalidInput):
    """Delegate count outside 1..number of hubs."""


class MissingShare(WiserError):
    """Reconstruction was attempted without every share."""


class LengthMismatch(WiserError):
    """Share payloads or a serialized input have inconsistent lengths."""


class MissingStrategy(WiserError):
    """A party in the flow's support has no strategy assigned."""

    def __init__(self, party: str):
        super().__init__(f"No strategy for party {party}")
        self.party = party


class InternalConsistencyError(WiserError):
    """The pipeline produced output contradicting its own invariants."""
