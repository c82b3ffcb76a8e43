"""Base configuration management for the simulator."""

import os

from dotenv import load_dotenv

DEFAULT_STATE_LIMIT = 100_000_000
DEFAULT_BRUTE_FORCE_LIMIT = 24


def read_optional_int(name: str, minimum: int = 0) -> int | None:
    """Read an integer environment variable.

    Args:
        name: Environment variable name
        minimum: Smallest accepted value

    Returns:
        The parsed integer, or None when the variable is unset or empty

    Raises:
        ValueError: If the value is not an integer or is below minimum
    """
    raw = os.getenv(name, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got: {raw}") from None
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got: {value}")
    return value


def read_int(name: str, default: int, minimum: int = 0) -> int:
    """Read an integer environment variable, falling back to default."""
    value = read_optional_int(name, minimum)
    return default if value is None else value


class BaseConfig:
    """Settings shared by every command.

    Subclasses extend this with command-specific defaults.
    """

    def __init__(self, env_file: str | None = None):
        """Load configuration from .env file.

        Args:
            env_file: Optional path to .env file
        """
        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()

        # Solver guards
        self.state_limit = read_int("WISER_STATE_LIMIT", DEFAULT_STATE_LIMIT, minimum=1)
        self.brute_force_limit = read_int(
            "WISER_BRUTE_FORCE_LIMIT", DEFAULT_BRUTE_FORCE_LIMIT, minimum=0
        )

        # Logging level
        self.log_level = os.getenv("LOG_LEVEL", "INFO").upper()
