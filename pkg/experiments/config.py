"""Runtime configuration for the experiment harness."""

import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import find_dotenv, load_dotenv

from arith.sieve import DEFAULT_SIEVE_CEILING


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs shared by every experiment runner.

    CLI flags override individual fields with ``dataclasses.replace``.
    """

    # Largest DivisorTable the harness may build
    sieve_ceiling: int

    # Grid size M = multiplier·x for the L¹ sampling
    multiplier: int

    # mpmath digits for the numeric constants (at most 30)
    precision: int

    seed: int

    # Logging
    log_level: str
    log_format: str

    output_dir: Path


def _int_env(name: str, default: int) -> int:
    """Read an integer environment variable or raise naming it."""
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise RuntimeError(f"Environment variable {name} must be an integer, got {raw!r}") from None


def load_config() -> ExperimentConfig:
    """Load configuration from the environment.

    A .env file found from the working directory upwards takes precedence
    over variables already set.

    Raises:
        RuntimeError: If a variable is malformed or out of range.
    """
    load_dotenv(find_dotenv(usecwd=True), override=True)

    precision = _int_env("DIVISOR_L1_PRECISION", 30)
    if not 1 <= precision <= 30:
        raise RuntimeError(f"DIVISOR_L1_PRECISION must be in [1, 30], got {precision}")
    multiplier = _int_env("DIVISOR_L1_MULTIPLIER", 16)
    if multiplier < 1:
        raise RuntimeError(f"DIVISOR_L1_MULTIPLIER must be >= 1, got {multiplier}")
    log_format = os.getenv("DIVISOR_L1_LOG_FORMAT", "text").lower()
    if log_format not in ("text", "json"):
        raise RuntimeError(f"DIVISOR_L1_LOG_FORMAT must be 'text' or 'json', got {log_format!r}")

    return ExperimentConfig(
        sieve_ceiling=_int_env("DIVISOR_L1_SIEVE_CEILING", DEFAULT_SIEVE_CEILING),
        multiplier=multiplier,
        precision=precision,
        seed=_int_env("DIVISOR_L1_SEED", 20240101),
        log_level=os.getenv("DIVISOR_L1_LOG_LEVEL", "INFO").upper(),
        log_format=log_format,
        output_dir=Path(os.getenv("DIVISOR_L1_OUTPUT_DIR", "./results")),
    )
