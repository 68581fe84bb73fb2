"""Configuration model and environment loading."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import ConfigError

DEFAULT_SEED = 1
DEFAULT_ALPHA = 0.6
DEFAULT_PERIOD = 1.0
DEFAULT_SIZE = 64
SEED_ENV = "FRACRAND_SEED"
MAX_SEED = (1 << 64) - 1


@dataclass(frozen=True)
class Settings:
    """Runtime parameters shared by every fracrand command."""

    seed: int
    alpha: float
    m: float
    n: int
    tolerance: float | None = None
    sine_seed: int | None = None


def parse_seed(value: str | int, source: str = "--seed") -> int:
    """Parse a 64-bit seed given as decimal or 0x-prefixed hex."""
    if isinstance(value, int):
        parsed = value
    else:
        text = value.strip().lower().replace("_", "")
        try:
            parsed = int(text, 16) if text.startswith("0x") else int(text, 10)
        except ValueError as exc:
            raise ConfigError(
                f"{source} must be a decimal or 0x-prefixed hex integer, got {value!r}."
            ) from exc

    if parsed < 0 or parsed > MAX_SEED:
        raise ConfigError(f"{source} must fit in 64 unsigned bits.")
    return parsed


def _require_positive(value: float, name: str) -> float:
    if not math.isfinite(value) or value <= 0:
        raise ConfigError(f"{name} must be a positive number.")
    return value


def load_settings(
    *,
    seed: str | int | None = None,
    alpha: float | None = None,
    m: float | None = None,
    n: int | None = None,
    tolerance: float | None = None,
    sine_seed: str | int | None = None,
) -> Settings:
    """Load settings from env vars and optional CLI overrides."""
    env_seed = (os.getenv(SEED_ENV) or "").strip()

    if seed is not None:
        resolved_seed = parse_seed(seed)
    elif env_seed:
        resolved_seed = parse_seed(env_seed, SEED_ENV)
    else:
        resolved_seed = DEFAULT_SEED

    resolved_alpha = DEFAULT_ALPHA if alpha is None else float(alpha)
    if not math.isfinite(resolved_alpha):
        raise ConfigError("--alpha must be a finite number.")

    resolved_m = _require_positive(DEFAULT_PERIOD if m is None else float(m), "--m")

    resolved_n = DEFAULT_SIZE if n is None else n
    if resolved_n <= 0:
        raise ConfigError("--n must be a positive integer.")

    if tolerance is not None:
        _require_positive(tolerance, "--tolerance")

    return Settings(
        seed=resolved_seed,
        alpha=resolved_alpha,
        m=resolved_m,
        n=resolved_n,
        tolerance=tolerance,
        sine_seed=None if sine_seed is None else parse_seed(sine_seed, "--sine-seed"),
    )
