"""Command-line configuration extending base config."""

import os

from core.base_config import BaseConfig, read_int, read_optional_int
from protocol.config import DEFAULT_EPSILON, DEFAULT_TIMEOUT
from solvers import SOLVERS

DEFAULT_MAX_BENCH_HUBS = 5


class CliConfig(BaseConfig):
    """Defaults for every subcommand; scenario values and flags take precedence."""

    def __init__(self, env_file: str | None = None):
        """Load configuration from .env file.

        Args:
            env_file: Optional path to .env file
        """
        super().__init__(env_file)

        self.solver = os.getenv("WISER_SOLVER", "dp").strip().lower()
        if self.solver not in SOLVERS:
            raise ValueError(
                f"WISER_SOLVER must be one of {', '.join(SOLVERS)}, got: {self.solver}"
            )
        self.radius = read_optional_int("WISER_RADIUS")

        self.fallback_solver = os.getenv("WISER_FALLBACK_SOLVER", "").strip().lower() or None
        if self.fallback_solver is not None and self.fallback_solver not in SOLVERS:
            raise ValueError(
                f"WISER_FALLBACK_SOLVER must be one of {', '.join(SOLVERS)}, "
                f"got: {self.fallback_solver}"
            )

        # Execution parameters
        self.timeout = read_int("WISER_TIMEOUT", DEFAULT_TIMEOUT, minimum=1)
        self.epsilon = read_int("WISER_EPSILON", DEFAULT_EPSILON, minimum=0)

        self.max_bench_hubs = read_int("WISER_MAX_BENCH_HUBS", DEFAULT_MAX_BENCH_HUBS, minimum=2)
