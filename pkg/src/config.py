from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Structural predicates are tested relative to max(1, ‖X‖_F).
STRUCTURE_TOL = 1e-10
RANK_TOL = 1e-10
COMMUTATOR_TOL = 1e-8
NORMALITY_TOL = 1e-8
PARTIAL_ISOMETRY_TOL = 1e-8
EIGEN_SLACK = 1e3
ZERO_CUT = 1e-10
UNIT_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-12

# Jordan structure decisions.
JORDAN_TOL = 1e-5
CLUSTER_FACTOR = 100
REAL_AXIS_FACTOR = 10

ENV_PREFIX = "QUATFACTOR_"


@dataclass(frozen=True)
class Settings:
    """
    Run-wide settings for the command surfaces.

    Attributes:
        tol: Tolerance used for pass/fail decisions in reports.
        seed: Seed for every randomized step (generators, deflation).
        log_level: Name of the logging level for the command line.
    """

    tol: float = STRUCTURE_TOL
    seed: int = 0
    log_level: str = "WARNING"

    def with_overrides(
        self, tol: float | None = None, seed: int | None = None
    ) -> Settings:
        """Return a copy with the given non-None fields replaced."""
        return Settings(
            tol=self.tol if tol is None else tol,
            seed=self.seed if seed is None else seed,
            log_level=self.log_level,
        )


def _read_float(name: str, default: float) -> float:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{name} must be a number, got {raw!r}") from None
    if not value > 0:
        raise ValueError(f"{ENV_PREFIX}{name} must be positive, got {raw!r}")
    return value


def _read_int(name: str, default: int) -> int:
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}") from None


def load_settings() -> Settings:
    """
    Build settings from the environment, reading a `.env` file if present.

    Returns:
        Settings with environment overrides applied.

    Raises:
        ValueError: If a variable is present but malformed.
    """
    load_dotenv()
    level = os.environ.get(ENV_PREFIX + "LOG_LEVEL", "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"{ENV_PREFIX}LOG_LEVEL is not a logging level: {level!r}")
    return Settings(
        tol=_read_float("TOL", STRUCTURE_TOL),
        seed=_read_int("SEED", 0),
        log_level=level,
    )
