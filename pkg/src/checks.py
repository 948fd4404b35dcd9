"""Measured invariants attached to every factorization result."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np
import numpy.typing as npt

# Thresholds are factor·tol on relative deviations.
RECONSTRUCTION_FACTOR = 10.0
TRIANGULAR_FACTOR = 10.0
STRUCTURE_FACTOR = 1.0
DETERMINANT_FACTOR = 100.0


@dataclass(frozen=True)
class Check:
    """One invariant with its measured deviation and the bound it must meet."""

    name: str
    deviation: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.threshold)

    @classmethod
    def relative(
        cls, name: str, deviation: float, scale: float, tol: float, factor: float = 1.0
    ) -> Check:
        return cls(name, float(deviation) / max(1.0, float(scale)), factor * tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "deviation": self.deviation,
            "threshold": self.threshold,
            "passed": self.passed,
        }


class HasChecks(Protocol):
    def checks(self, tol: float) -> list[Check]: ...


def all_passed(checks: list[Check]) -> bool:
    return all(check.passed for check in checks)


def norm(X: npt.ArrayLike) -> float:
    return float(np.linalg.norm(X))


def lower_defect(X: npt.ArrayLike, k: int = -1) -> float:
    """Frobenius norm of the part of X on or below diagonal k."""
    return norm(np.tril(X, k))


def unitary_defect(U: npt.ArrayLike) -> float:
    U = np.asarray(U)
    return norm(U.conj().T @ U - np.eye(U.shape[1]))
