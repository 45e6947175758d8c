"""Runtime configuration: numeric tolerances and paths.

Values come from the environment; a ``config.env`` in the working directory is
loaded first when present.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from mtc_coset.errors import ConfigError

logger = logging.getLogger(__name__)

# Load environment variables from repo root config.env if present
try:
    load_dotenv("config.env")
except Exception:
    # Non-fatal if dotenv missing or file not present
    pass

DEFAULT_EPS = 1e-9
DEFAULT_EPS_INT = 1e-6
DEFAULT_MATCH_RADIUS = 1e-6
DEFAULT_LOG_PATH = "logs/mtc_coset.log"
DEFAULT_MAX_RANK = 64


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances used by every check.

    Attributes:
        num: analytic identities (unitarity, balancing, covariance, ...).
        int_: distance to the nearest integer accepted when rounding.
        match_radius: acceptance radius for eigenvalue labeling.
    """

    num: float = DEFAULT_EPS
    int_: float = DEFAULT_EPS_INT
    match_radius: float = DEFAULT_MATCH_RADIUS

    def to_dict(self) -> dict[str, float]:
        return {"num": self.num, "int": self.int_, "match_radius": self.match_radius}


def _positive_float(var: str, default: float) -> float:
    raw = os.getenv(var)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = float(raw)
    except ValueError as e:
        raise ConfigError(f"{var} must be a number, got {raw!r}") from e
    if not value > 0:
        raise ConfigError(f"{var} must be positive, got {raw!r}")
    return value


def _positive_int(var: str, default: int) -> int:
    raw = os.getenv(var)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"{var} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ConfigError(f"{var} must be positive, got {raw!r}")
    return value


def load_tolerances() -> Tolerances:
    """Read tolerances from the environment (defaults when unset)."""
    tol = Tolerances(
        num=_positive_float("MTC_COSET_EPS", DEFAULT_EPS),
        int_=_positive_float("MTC_COSET_EPS_INT", DEFAULT_EPS_INT),
        match_radius=_positive_float("MTC_COSET_MATCH_RADIUS", DEFAULT_MATCH_RADIUS),
    )
    logger.debug("Tolerances loaded: %s", tol)
    return tol


def resolve(tol: Tolerances | None) -> Tolerances:
    return tol if tol is not None else load_tolerances()


def max_rank() -> int:
    """Rank limit for module category decomposition."""
    return _positive_int("MTC_COSET_MAX_RANK", DEFAULT_MAX_RANK)


def log_path() -> str:
    return os.getenv("MTC_COSET_LOG_PATH") or DEFAULT_LOG_PATH
