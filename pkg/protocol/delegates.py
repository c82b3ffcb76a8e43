"""Delegate selection from common randomness."""

import hashlib
import logging
from collections.abc import Sequence

from core.errors import BadK, InvalidInput

from .config import SEED_BYTES

logger = logging.getLogger(__name__)

WORD = 1 << 64


class HashStream:
    """Unbounded byte stream SHA-256(seed || counter), counter as 8-byte big-endian."""

    def __init__(self, seed: bytes):
        if len(seed) != SEED_BYTES:
            raise InvalidInput(f"seed must be {SEED_BYTES} bytes, got {len(seed)}")
        self._seed = seed
        self._counter = 0
        self._buffer = b""

    def next_u64(self) -> int:
        while len(self._buffer) < 8:
            block = hashlib.sha256(self._seed + self._counter.to_bytes(8, "big")).digest()
            self._buffer += block
            self._counter += 1
        word, self._buffer = self._buffer[:8], self._buffer[8:]
        return int.from_bytes(word, "big")

    def uniform(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by rejection sampling."""
        limit = WORD - WORD % bound
        while True:
            value = self.next_u64()
            if value < limit:
                return value % bound


def select_delegates(hubs: Sequence[str], k_d: int, seed: bytes) -> list[str]:
    """Pick k_d hubs by a partial Fisher-Yates shuffle driven by the seed.

    Args:
        hubs: Hub ids in factory order
        k_d: Number of delegates
        seed: 32 bytes of common randomness

    Returns:
        The first k_d positions of the shuffled hub list

    Raises:
        BadK: If k_d is outside 1..len(hubs)
    """
    if not 1 <= k_d <= len(hubs):
        raise BadK(f"Delegate count must be in 1..{len(hubs)}, got: {k_d}")
    stream = HashStream(seed)
    order = list(hubs)
    for i in range(k_d):
        j = i + stream.uniform(len(order) - i)
        order[i], order[j] = order[j], order[i]
    delegates = order[:k_d]
    logger.info(f"Selected delegates {delegates}")
    return delegates
