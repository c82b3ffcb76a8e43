"""Public parameters of one protocol run."""

from dataclasses import dataclass

from core.base_config import DEFAULT_BRUTE_FORCE_LIMIT, DEFAULT_STATE_LIMIT
from core.errors import InvalidInput

SEED_BYTES = 32
DEFAULT_TIMEOUT = 10
DEFAULT_EPSILON = 1
ZERO_SEED = bytes(SEED_BYTES)


@dataclass(frozen=True)
class ProtocolConfig:
    """Parameters every participant agrees on before a run.

    randomness_seed stands in for the block header all parties read the
    common randomness from. pad_to is the public length every submitted
    transaction list is padded to.
    """

    num_delegates: int = 1
    randomness_seed: bytes = ZERO_SEED
    pad_to: int = 0
    solver: str = "dp"
    radius: int | None = None
    timeout: int = DEFAULT_TIMEOUT
    epsilon: int = DEFAULT_EPSILON
    fallback: str | None = None
    state_limit: int = DEFAULT_STATE_LIMIT
    brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT

    def __post_init__(self):
        if len(self.randomness_seed) != SEED_BYTES:
            raise InvalidInput(
                f"randomness_seed must be {SEED_BYTES} bytes, got {len(self.randomness_seed)}"
            )
        if self.num_delegates < 1:
            raise InvalidInput(f"num_delegates must be >= 1, got: {self.num_delegates}")
        if self.pad_to < 0:
            raise InvalidInput(f"pad_to must be >= 0, got: {self.pad_to}")
        if self.timeout <= 0:
            raise InvalidInput(f"timeout must be > 0, got: {self.timeout}")
        if self.epsilon < 0:
            raise InvalidInput(f"epsilon must be >= 0, got: {self.epsilon}")
        if self.solver == "dp-bounded" and self.radius is None:
            raise InvalidInput("solver dp-bounded requires a radius")
        if self.radius is not None and self.radius < 0:
            raise InvalidInput(f"radius must be >= 0, got: {self.radius}")

    @property
    def seed_hex(self) -> str:
        return self.randomness_seed.hex()
