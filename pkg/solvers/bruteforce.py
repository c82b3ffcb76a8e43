"""Exhaustive oracle used as ground truth on small instances."""

import logging

import numpy as np

from core.base_config import DEFAULT_BRUTE_FORCE_LIMIT
from core.errors import TooLarge

from .base import BaseSolver, Selection, with_zero_columns
from .ilp import IlpInstance, Solution

logger = logging.getLogger(__name__)

CHUNK = 1 << 16


class BruteForceSolver(BaseSolver):
    """Enumerate every subset of the factory-moving transactions.

    Subset codes give column j (in id order) the bit n-1-j, so the largest
    code among optimal feasible subsets is the lexicographically smallest
    id set.
    """

    name = "brute"

    def __init__(self, limit: int = DEFAULT_BRUTE_FORCE_LIMIT):
        self.limit = limit

    def _select(self, inst: IlpInstance) -> Selection:
        if inst.num_txns > self.limit:
            raise TooLarge(inst.num_txns, self.limit)

        columns = inst.nonzero_columns_by_id()
        n = len(columns)
        matrix = inst.matrix[:, columns] if n else np.zeros((inst.num_hubs, 0), np.int64)
        weights = np.asarray([inst.weights[j] for j in columns], dtype=np.int64)
        cover = np.asarray(inst.cover, dtype=np.int64)
        shifts = np.arange(n - 1, -1, -1, dtype=np.int64)

        best_value = -1
        best_code = 0
        total = 1 << n
        for start in range(0, total, CHUNK):
            codes = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
            bits = (codes[:, None] >> shifts[None, :]) & 1
            feasible = np.all(bits @ matrix.T <= cover, axis=1)
            if not feasible.any():
                continue
            values = np.where(feasible, bits @ weights, -1)
            top = int(values.max())
            code = int(codes[values == top].max())
            if top > best_value or (top == best_value and code > best_code):
                best_value, best_code = top, code

        picked = [columns[j] for j in range(n) if (best_code >> (n - 1 - j)) & 1]
        logger.debug(f"Enumerated {total} subsets of {n} columns")
        return Selection(with_zero_columns(inst, picked), states_explored=total)


def solve_bruteforce(inst: IlpInstance, limit: int = DEFAULT_BRUTE_FORCE_LIMIT) -> Solution:
    """Optimal solution by enumeration.

    Raises:
        TooLarge: If the instance has more than limit transactions
    """
    return BruteForceSolver(limit).solve(inst)
