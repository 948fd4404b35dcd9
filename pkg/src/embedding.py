"""
The χ embedding of quaternion matrices into complex matrices, the dual
operation X^♯ = −Z X^T Z and the antilinear time-reversal operator 𝒯.

Block convention: rows and columns 0..N-1 form the upper block and N..2N-1
the lower block, so 𝒯 pairs index j with N+j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from src.config import STRUCTURE_TOL
from src.errors import (
    NotQuaternionic,
    NotSelfDual,
    NotSymmetric,
    ShapeError,
)
from src.quaternion import QuatMatrix

logger = logging.getLogger(__name__)

CMatrix = npt.NDArray[np.complex128]

FLAG_NAMES = (
    "quaternionic",
    "selfdual",
    "symmetric",
    "hermitian",
    "normal",
    "unitary",
    "symplectic",
)


def as_square(X: npt.ArrayLike) -> CMatrix:
    """Coerce to a complex square matrix or raise ShapeError."""
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] == 0:
        raise ShapeError(f"expected a non-empty square matrix, got shape {X.shape}")
    return X


def half_dim(X: npt.ArrayLike) -> int:
    """Return N for a 2N×2N matrix, raising ShapeError on odd dimension."""
    n = np.shape(X)[0]
    if n % 2:
        raise ShapeError(f"dimension must be even, got {n}")
    return n // 2


def scale_of(X: CMatrix) -> float:
    """max(1, ‖X‖_F), the reference size for relative tolerances."""
    return max(1.0, float(np.linalg.norm(X)))


def Z(n: int) -> CMatrix:
    """The 2n×2n antisymmetric unitary [[0, I], [−I, 0]]."""
    eye = np.eye(n, dtype=complex)
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, eye], [-eye, zero]])


def dual(X: npt.ArrayLike) -> CMatrix:
    """
    Return X^♯ = −Z X^T Z.

    Computed blockwise as [[D^T, −B^T], [−C^T, A^T]] for X = [[A, B], [C, D]].

    Raises:
        ShapeError: If X is not square of even dimension.
    """
    X = as_square(X)
    n = half_dim(X)
    A, B = X[:n, :n], X[:n, n:]
    C, D = X[n:, :n], X[n:, n:]
    return np.block([[D.T, -B.T], [-C.T, A.T]])


def dual_wrt(X: npt.ArrayLike, K: npt.ArrayLike) -> CMatrix:
    """Dual with respect to an antisymmetric unitary K: X ↦ −K X^T K."""
    X = as_square(X)
    K = as_square(K)
    if X.shape != K.shape:
        raise ShapeError(f"form {K.shape} does not match matrix {X.shape}")
    return -K @ X.T @ K


def chi(Q: QuatMatrix) -> CMatrix:
    """Embed A + Bĵ as [[A, B], [−conj(B), conj(A)]]."""
    A, B = Q.complex_parts()
    return np.block([[A, B], [-B.conj(), A.conj()]])


def quaternionic_deviation(X: CMatrix) -> float:
    return float(np.linalg.norm(X.conj().T - dual(X)))


def ensure_quaternionic(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> CMatrix:
    """
    Validate the quaternionic condition X* = X^♯ and return X as an array.

    Raises:
        ShapeError: If X is not square of even dimension.
        NotQuaternionic: If ‖X* − X^♯‖_F exceeds tol·max(1, ‖X‖_F).
    """
    X = as_square(X)
    half_dim(X)
    deviation = quaternionic_deviation(X)
    threshold = tol * scale_of(X)
    if deviation > threshold:
        raise NotQuaternionic(
            f"matrix is not quaternionic: ‖X* − X^♯‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    return X


def ensure_selfdual(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> CMatrix:
    """Validate X^♯ = X; raises NotSelfDual or ShapeError."""
    X = as_square(X)
    half_dim(X)
    deviation = float(np.linalg.norm(X - dual(X)))
    threshold = tol * scale_of(X)
    if deviation > threshold:
        raise NotSelfDual(
            f"matrix is not self-dual: ‖X − X^♯‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    return X


def ensure_symmetric(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> CMatrix:
    """Validate X^T = X; raises NotSymmetric or ShapeError."""
    X = as_square(X)
    deviation = float(np.linalg.norm(X - X.T))
    threshold = tol * scale_of(X)
    if deviation > threshold:
        raise NotSymmetric(
            f"matrix is not symmetric: ‖X − X^T‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    return X


def quaternionic_split(G: npt.ArrayLike) -> tuple[CMatrix, CMatrix]:
    """
    Split G = X + iY with X and Y both quaternionic.

    X = ½(G^{♯*} + G) and Y = (i/2)G^{♯*} − (i/2)G; the split is unique.

    Raises:
        ShapeError: If G is not square of even dimension.
    """
    G = as_square(G)
    G_sharp_star = dual(G).conj().T
    X = 0.5 * (G_sharp_star + G)
    Y = 0.5j * G_sharp_star - 0.5j * G
    return X, Y


def chi_inv(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> QuatMatrix:
    """
    Recover the quaternion matrix whose χ-image is (the quaternionic part of) X.

    Args:
        X: Complex 2N×2N matrix.
        tol: Relative tolerance for the quaternionic condition.

    Returns:
        Q with χ(Q) equal to the quaternionic projection of X.

    Raises:
        NotQuaternionic: If X is farther than tol from the quaternionic class.
    """
    X = ensure_quaternionic(X, tol)
    n = X.shape[0] // 2
    projected, _ = quaternionic_split(X)
    return QuatMatrix.from_complex_parts(projected[:n, :n], projected[:n, n:])


def apply_T(xi: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """
    Apply 𝒯[v; w] = [−conj(w); conj(v)].

    A 2-D argument is treated column by column.

    Raises:
        ShapeError: If the leading length is odd.
    """
    xi = np.asarray(xi, dtype=complex)
    if xi.ndim not in (1, 2):
        raise ShapeError(f"apply_T expects a vector or a matrix of columns, got {xi.shape}")
    n = half_dim(xi)
    return np.concatenate([-xi[n:].conj(), xi[:n].conj()], axis=0)


def pullback_vector(xi: npt.ArrayLike) -> QuatMatrix:
    """Map [v; w] ∈ ℂ^{2N} to the quaternion vector v − ĵw."""
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    n = half_dim(xi)
    # ĵw = conj(w)ĵ
    return QuatMatrix.from_complex_parts(xi[:n], -xi[n:].conj())


def time_reversal_defect(X: npt.ArrayLike, vectors: npt.ArrayLike) -> float:
    """
    Measure how far X is from commuting with 𝒯.

    Returns:
        max over columns ξ of ‖Xξ + 𝒯(X𝒯ξ)‖ / ‖ξ‖, which vanishes exactly
        when X is quaternionic.
    """
    X = as_square(X)
    vectors = np.asarray(vectors, dtype=complex)
    if vectors.ndim == 1:
        vectors = vectors[:, None]
    if vectors.shape[0] != X.shape[0]:
        raise ShapeError(f"vectors of length {vectors.shape[0]} for matrix {X.shape}")
    defect = X @ vectors + apply_T(X @ apply_T(vectors))
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0.0] = 1.0
    return float(np.max(np.linalg.norm(defect, axis=0) / norms))


@dataclass(frozen=True)
class StructureReport:
    """
    Tolerance-tagged structure flags for a complex matrix.

    A flag is set iff its deviation is at most tolerance·scale, where scale
    is max(1, ‖X‖_F).
    """

    quaternionic: bool
    selfdual: bool
    symmetric: bool
    hermitian: bool
    normal: bool
    unitary: bool
    symplectic: bool
    deviations: dict[str, float] = field(default_factory=dict)
    tolerance: float = STRUCTURE_TOL
    scale: float = 1.0

    @property
    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in FLAG_NAMES}

    def holding(self) -> list[str]:
        return [name for name, value in self.flags.items() if value]

    def to_dict(self) -> dict:
        return {
            "flags": self.flags,
            "deviations": dict(self.deviations),
            "tolerance": self.tolerance,
            "scale": self.scale,
        }


def classify(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> StructureReport:
    """
    Compute every structural defect of X and the resulting flags.

    Odd-dimensional input reports infinite deviation for the ♯-based classes.
    """
    X = as_square(X)
    n = X.shape[0]
    X_star = X.conj().T
    deviations = {
        "symmetric": float(np.linalg.norm(X - X.T)),
        "hermitian": float(np.linalg.norm(X - X_star)),
        "normal": float(np.linalg.norm(X @ X_star - X_star @ X)),
        "unitary": float(np.linalg.norm(X_star @ X - np.eye(n))),
    }
    if n % 2 == 0:
        X_sharp = dual(X)
        deviations["quaternionic"] = float(np.linalg.norm(X_star - X_sharp))
        deviations["selfdual"] = float(np.linalg.norm(X - X_sharp))
        Zn = Z(n // 2)
        deviations["symplectic"] = float(np.linalg.norm(X.T @ Zn @ X - Zn))
    else:
        for name in ("quaternionic", "selfdual", "symplectic"):
            deviations[name] = float("inf")

    scale = scale_of(X)
    threshold = tol * scale
    flags = {name: deviations[name] <= threshold for name in FLAG_NAMES}
    logger.debug("classify n=%d threshold=%.3e flags=%s", n, threshold, flags)
    return StructureReport(
        **flags,
        deviations={name: deviations[name] for name in FLAG_NAMES},
        tolerance=tol,
        scale=scale,
    )
