"""Exact layered dynamic program and its state-radius-bounded variant.

States are partial aggregates A.x over the first h-1 hub rows (the last row
is minus their sum). When the ranges of those rows fit, a state is packed
into one int64 key with a mixed-radix code, so a layer is a sorted key array
and selecting column j adds a constant to every key. Otherwise states stay
as int64 rows sorted lexicographically. Columns are processed in reverse id
order; forward reconstruction then prefers selecting the earliest ids, which
realizes the shared tie-break.
"""

import logging
from dataclasses import dataclass

import numpy as np

from core.base_config import DEFAULT_STATE_LIMIT
from core.errors import InvalidInput, StateExplosion

from .base import BaseSolver, Selection, with_zero_columns
from .greedy import greedy_columns, peel_columns
from .ilp import IlpInstance, Solution

logger = logging.getLogger(__name__)

MAX_KEY_SPACE = 1 << 62


@dataclass(frozen=True)
class PackedStates:
    """Mixed-radix packing of hub-load vectors into int64 keys."""

    low: np.ndarray
    radix: np.ndarray
    place: np.ndarray

    @classmethod
    def for_matrix(cls, matrix: np.ndarray, clip: int | None = None) -> "PackedStates | None":
        """The packing for matrix, or None if its key space exceeds MAX_KEY_SPACE."""
        rows = matrix[:-1]
        low = np.minimum(rows, 0).sum(axis=1)
        high = np.maximum(rows, 0).sum(axis=1)
        if clip is not None:
            low = np.maximum(low, -clip)
            high = np.minimum(high, clip)
        radix = high - low + 1
        place = []
        size = 1
        for r in radix.tolist():
            place.append(size)
            size *= r
        if size > MAX_KEY_SPACE:
            return None
        return cls(low, radix, np.asarray(place, dtype=np.int64))

    def origin(self) -> np.ndarray:
        return np.asarray([int(-self.low @ self.place)], dtype=np.int64)

    def column_shifts(self, matrix: np.ndarray) -> np.ndarray:
        return matrix[:-1].T @ self.place

    def sort_keys(self, keys: np.ndarray) -> tuple[np.ndarray, ...]:
        return (keys,)

    def distinct(self, keys: np.ndarray) -> np.ndarray:
        """Mask of the first key of each run in a sorted array."""
        first = np.ones(len(keys), dtype=bool)
        first[1:] = keys[1:] != keys[:-1]
        return first

    def decode(self, keys: np.ndarray) -> np.ndarray:
        """Full h-row load vectors for a key array."""
        digits = (keys[:, None] // self.place[None, :]) % self.radix[None, :] + self.low[None, :]
        return np.hstack([digits, -digits.sum(axis=1, keepdims=True)])

    def lookup(self, layer: "_Layer", keys: np.ndarray) -> np.ndarray:
        return layer.picks[np.searchsorted(layer.keys, keys)]

    def unique(self, keys: np.ndarray) -> np.ndarray:
        return np.unique(keys)


@dataclass(frozen=True)
class RowStates:
    """Hub-load vectors kept as int64 rows, for loads too wide to pack."""

    width: int

    def origin(self) -> np.ndarray:
        return np.zeros((1, self.width), dtype=np.int64)

    def column_shifts(self, matrix: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(matrix[:-1].T, dtype=np.int64)

    def sort_keys(self, keys: np.ndarray) -> tuple[np.ndarray, ...]:
        # lexsort treats the last key as primary
        return tuple(keys[:, i] for i in reversed(range(self.width)))

    def distinct(self, keys: np.ndarray) -> np.ndarray:
        first = np.ones(len(keys), dtype=bool)
        first[1:] = np.any(keys[1:] != keys[:-1], axis=1)
        return first

    def decode(self, keys: np.ndarray) -> np.ndarray:
        return np.hstack([keys, -keys.sum(axis=1, keepdims=True)])

    def lookup(self, layer: "_Layer", keys: np.ndarray) -> np.ndarray:
        index = {row: i for i, row in enumerate(map(tuple, layer.keys.tolist()))}
        return layer.picks[[index[row] for row in map(tuple, keys.tolist())]]

    def unique(self, keys: np.ndarray) -> np.ndarray:
        return np.unique(keys, axis=0)


@dataclass
class _Layer:
    keys: np.ndarray
    picks: np.ndarray


class DpSolver(BaseSolver):
    """Exact oracle: one state per distinct load vector, keeping the best value.

    Two cuts keep it exact. A state whose load cannot drop back under the
    cover even if every remaining column is picked for its negative entries
    is discarded. A state that cannot reach the value of a known feasible
    selection is discarded too.
    """

    name = "dp"

    def __init__(self, state_limit: int = DEFAULT_STATE_LIMIT):
        self.state_limit = state_limit
        self.radius: int | None = None

    def _lower_bound(self, inst: IlpInstance, columns: list[int]) -> int | None:
        nonzero = set(columns)
        greedy = sum(inst.weights[j] for j in greedy_columns(inst) if j in nonzero)
        peeled = sum(inst.weights[j] for j in peel_columns(inst, columns))
        return max(greedy, peeled)

    def _select(self, inst: IlpInstance) -> Selection:
        columns = inst.nonzero_columns_by_id()
        n = len(columns)
        if n == 0:
            return Selection(with_zero_columns(inst, []), states_explored=1)

        matrix = inst.matrix[:, columns]
        weights = np.asarray([inst.weights[j] for j in columns], dtype=np.int64)
        cover = np.asarray(inst.cover, dtype=np.int64)
        clip = None if self.radius is None else self.radius + inst.delta
        states = PackedStates.for_matrix(matrix, clip) or RowStates(inst.num_hubs - 1)
        if isinstance(states, RowStates):
            logger.debug(f"{self.name}: load ranges too wide to pack, keeping states as rows")
        shifts = states.column_shifts(matrix)
        lower_bound = self._lower_bound(inst, columns)

        # Most negative load and total weight the still-unprocessed columns 0..j-1 can add.
        neg_prefix = np.zeros((inst.num_hubs, n + 1), dtype=np.int64)
        neg_prefix[:, 1:] = np.cumsum(np.minimum(matrix, 0), axis=1)
        weight_prefix = np.zeros(n + 1, dtype=np.int64)
        weight_prefix[1:] = np.cumsum(weights)

        keys = states.origin()
        values = np.zeros(1, dtype=np.int64)
        layers: list[_Layer] = []
        explored = 1
        pruned = False

        for j in range(n - 1, -1, -1):
            size = len(keys)
            cand_keys = np.concatenate([keys, keys + shifts[j]])
            cand_values = np.concatenate([values, values + weights[j]])
            cand_picks = np.concatenate([np.zeros(size, np.int8), np.ones(size, np.int8)])
            explored += 2 * size

            order = np.lexsort((-cand_picks, -cand_values, *states.sort_keys(cand_keys)))
            cand_keys, cand_values, cand_picks = (
                cand_keys[order],
                cand_values[order],
                cand_picks[order],
            )
            first = states.distinct(cand_keys)
            keys, values, picks = cand_keys[first], cand_values[first], cand_picks[first]

            loads = states.decode(keys)
            keep = np.all(loads + neg_prefix[:, j] <= cover, axis=1)
            if self.radius is not None:
                inside = np.abs(loads).max(axis=1) <= self.radius
                pruned = pruned or bool(np.any(keep & ~inside))
                keep &= inside
            if lower_bound is not None:
                keep &= values + weight_prefix[j] >= lower_bound
            keys, values, picks = keys[keep], values[keep], picks[keep]

            if len(keys) > self.state_limit:
                raise StateExplosion(len(keys), self.state_limit)
            layers.append(_Layer(keys, picks))
        layers.reverse()

        picked = self._reconstruct(states, layers, keys, values, shifts, columns)
        logger.debug(f"{self.name}: {n} columns, {explored} states explored, pruned={pruned}")
        return Selection(with_zero_columns(inst, picked), explored, pruned)

    @staticmethod
    def _reconstruct(
        states: PackedStates | RowStates,
        layers: list[_Layer],
        keys: np.ndarray,
        values: np.ndarray,
        shifts: np.ndarray,
        columns: list[int],
    ) -> list[int]:
        """Walk forward from every optimal final state, selecting whenever possible."""
        current = states.unique(keys[values == values.max()])
        picked = []
        for j, layer in enumerate(layers):
            picks = states.lookup(layer, current)
            if picks.any():
                picked.append(columns[j])
                current = states.unique(current[picks == 1] - shifts[j])
        return picked


class BoundedDpSolver(DpSolver):
    """The same program, discarding any state whose load max-norm exceeds radius."""

    name = "dp-bounded"

    def __init__(self, radius: int, state_limit: int = DEFAULT_STATE_LIMIT):
        if isinstance(radius, bool) or not isinstance(radius, int) or radius < 0:
            raise InvalidInput(f"radius must be a non-negative integer, got: {radius!r}")
        super().__init__(state_limit)
        self.radius = radius

    def _lower_bound(self, inst: IlpInstance, columns: list[int]) -> int | None:
        return None


def solve_dp(inst: IlpInstance, state_limit: int = DEFAULT_STATE_LIMIT) -> Solution:
    """Exact optimum with the lexicographically smallest optimal id set.

    Raises:
        StateExplosion: If a layer exceeds state_limit states
    """
    return DpSolver(state_limit).solve(inst)


def solve_dp_bounded(
    inst: IlpInstance, radius: int, state_limit: int = DEFAULT_STATE_LIMIT
) -> Solution:
    """Feasible solution from the radius-bounded program; stats.pruned flags any discard."""
    return BoundedDpSolver(radius, state_limit).solve(inst)
