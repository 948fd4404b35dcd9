"""Exception hierarchy shared by every module."""

from __future__ import annotations

import numpy as np


class QuatFactorError(Exception):
    """Base class for all library errors."""


class ShapeError(QuatFactorError, ValueError):
    """Raised for non-square, odd-dimensional or mismatched operands."""


class StructureError(QuatFactorError, ValueError):
    """
    Raised when an input misses a required structure.

    Attributes:
        deviation: Measured defect of the structural identity.
        threshold: The bound the defect had to meet.
    """

    def __init__(
        self,
        message: str,
        deviation: float | None = None,
        threshold: float | None = None,
    ) -> None:
        super().__init__(message)
        self.deviation = deviation
        self.threshold = threshold


class NotQuaternionic(StructureError):
    pass


class NotSelfDual(StructureError):
    pass


class NotSymmetric(StructureError):
    pass


class NotHermitian(StructureError):
    pass


class NotPositiveSemidefinite(NotHermitian):
    pass


class NotNormal(StructureError):
    pass


class NotSymplectic(StructureError):
    pass


class NotCommuting(StructureError):
    pass


class NotPartialIsometry(StructureError):
    pass


class NotUnit(StructureError):
    pass


class NotOrthogonal(StructureError):
    pass


class OddKernel(StructureError):
    """A kernel that must carry Kramers pairs came out odd-dimensional."""


class NotAnEigenvalue(StructureError):
    pass


class NumericalError(QuatFactorError, np.linalg.LinAlgError):
    """Raised when a numerical decision cannot be made reliably."""


class NoConvergence(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class MatrixFileError(QuatFactorError, ValueError):
    """
    Raised for malformed matrix files.

    Attributes:
        field: Name of the offending header field or section.
    """

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


class UsageError(QuatFactorError, ValueError):
    """Raised for an unknown command, flag value or wrong number of inputs."""
