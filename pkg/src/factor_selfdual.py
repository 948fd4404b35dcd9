"""
Self-dual Schur form, structured polar decompositions for symmetric and
self-dual matrices, and the tensor-product transpose identities.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.checks import (
    RECONSTRUCTION_FACTOR,
    STRUCTURE_FACTOR,
    TRIANGULAR_FACTOR,
    Check,
    lower_defect,
    norm,
)
from src.config import COMMUTATOR_TOL, STRUCTURE_TOL
from src.embedding import (
    CMatrix,
    Z,
    as_square,
    dual,
    dual_wrt,
    ensure_selfdual,
    ensure_symmetric,
    half_dim,
    scale_of,
)
from src.errors import NotHermitian, ShapeError
from src.factor_quaternionic import (
    PolarResult,
    SpectralResult,
    deflate_commuting,
    minimal_polar,
    unitary_checks,
)
from src.kernels import check_commuting, svd_complex
from src.symplectic import extend_selfdual_isometry, extend_symmetric_isometry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelfDualSchurResult:
    """
    U*X_jU = [[T_j, C_j], [0, T_j^T]] with T_j upper triangular and C_j skew.

    Attributes:
        lower_left: Norm of the discarded lower-left block per input.
        skew_defects: ‖M12 + M12^T‖ of the raw upper-right block per input.
    """

    U: CMatrix
    T: list[CMatrix]
    C: list[CMatrix]
    residuals: list[float]
    triangular_defects: list[float]
    lower_left: list[float]
    skew_defects: list[float]
    scales: list[float]

    def block_form(self, j: int = 0) -> CMatrix:
        T, C = self.T[j], self.C[j]
        return np.block([[T, C], [np.zeros_like(T), T.T]])

    def checks(self, tol: float) -> list[Check]:
        out = unitary_checks("U", self.U, tol)
        rows = zip(
            self.residuals, self.triangular_defects, self.lower_left, self.skew_defects, self.scales
        )
        for j, (res, tri, low, skew, scale) in enumerate(rows):
            out += [
                Check.relative(f"X{j} reconstruction", res, scale, tol, RECONSTRUCTION_FACTOR),
                Check.relative(f"X{j} triangular", tri, scale, tol, TRIANGULAR_FACTOR),
                Check.relative(f"X{j} lower-left block", low, scale, tol, TRIANGULAR_FACTOR),
                Check.relative(f"X{j} C skew", skew, scale, tol, TRIANGULAR_FACTOR),
            ]
        return out


def schur_selfdual_commuting(
    Xs: Sequence[npt.ArrayLike],
    seed: int = 0,
    tol: float = STRUCTURE_TOL,
    commutator_tol: float = COMMUTATOR_TOL,
) -> SelfDualSchurResult:
    """
    Simultaneous self-dual Schur form of a commuting self-dual family.

    If X_j v = λ_j v then X_j*(𝒯v) = conj(λ_j)𝒯v, so a symplectic completion
    of v clears column 1 and row N+1 at once; the deflation then recurses.

    Raises:
        NotSelfDual: If some X_j^♯ ≠ X_j.
        NotCommuting: If the family does not commute.
    """
    mats = [ensure_selfdual(X, tol) for X in Xs]
    check_commuting(mats, commutator_tol)
    n = mats[0].shape[0] // 2
    U = deflate_commuting(mats, seed=seed, conjugate_upper=False)

    T, C, residuals, tri, low, skew, scales = [], [], [], [], [], [], []
    for X in mats:
        M = U.conj().T @ X @ U
        Tj = np.triu(M[:n, :n])
        M12 = M[:n, n:]
        Cj = 0.5 * (M12 - M12.T)
        form = np.block([[Tj, Cj], [np.zeros_like(Tj), Tj.T]])
        T.append(Tj)
        C.append(Cj)
        residuals.append(norm(M - form))
        tri.append(lower_defect(M[:n, :n], -1))
        low.append(norm(M[n:, :n]))
        skew.append(norm(M12 + M12.T))
        scales.append(scale_of(X))
    logger.info("self-dual Schur form of %d matrices, N=%d", len(mats), n)
    return SelfDualSchurResult(U, T, C, residuals, tri, low, skew, scales)


def diagonalize_hermitian_selfdual(
    X: npt.ArrayLike, seed: int = 0, tol: float = STRUCTURE_TOL
) -> SpectralResult:
    """
    X = U diag(D, D) U* for a Hermitian self-dual X, U symplectic unitary, D real.

    Raises:
        NotHermitian: If X ≠ X*.
        NotSelfDual: If X^♯ ≠ X.
    """
    X = as_square(X)
    deviation = norm(X - X.conj().T)
    threshold = tol * scale_of(X)
    if deviation > threshold:
        raise NotHermitian(
            f"matrix is not Hermitian: ‖X − X*‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    schur = schur_selfdual_commuting([X], seed=seed, tol=tol)
    d = np.diag(schur.T[0]).real.astype(complex)
    form = np.diag(np.concatenate([d, d]))
    residual = norm(schur.U.conj().T @ X @ schur.U - form)
    return SpectralResult(schur.U, [d], [residual], [scale_of(X)])


def polar_symmetric(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> PolarResult:
    """
    Polar decomposition X = U|X| of a complex symmetric matrix with U^T = U.

    Accepts any dimension. Also measures the companion identity |X*| = |X|^T.

    Raises:
        NotSymmetric: If X^T ≠ X.
    """
    X = ensure_symmetric(X, tol)
    W, P = minimal_polar(X)
    W = 0.5 * (W + W.T)
    U = extend_symmetric_isometry(W, structure_tol=max(tol, 1e-8))
    left, s, _ = svd_complex(X)
    abs_adjoint = (left * s) @ left.conj().T
    return PolarResult(
        U=U,
        P=P,
        W=W,
        variant="symmetric",
        reconstruction=norm(X - U @ P),
        minimal_reconstruction=norm(X - W @ P),
        scale=scale_of(X),
        companion=norm(abs_adjoint - P.T),
    )


def polar_selfdual(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> PolarResult:
    """
    Polar decomposition X = U|X| of a self-dual matrix with U^♯ = U.

    Raises:
        NotSelfDual: If X^♯ ≠ X.
    """
    X = ensure_selfdual(X, tol)
    W, P = minimal_polar(X)
    W = 0.5 * (W + dual(W))
    U = extend_selfdual_isometry(W, structure_tol=max(tol, 1e-8))
    return PolarResult(
        U=U,
        P=P,
        W=W,
        variant="selfdual",
        reconstruction=norm(X - U @ P),
        minimal_reconstruction=norm(X - W @ P),
        scale=scale_of(X),
    )


def tensor_transpose_unitary(n: int, m: int) -> CMatrix:
    """U = (I⊗I − i Z_N⊗Z_M)/√2, a symmetric unitary of dimension 4NM."""
    if n < 1 or m < 1:
        raise ShapeError(f"tensor sizes must be positive, got N={n}, M={m}")
    W = np.kron(Z(n), Z(m))
    return (np.eye(4 * n * m) - 1j * W) / math.sqrt(2.0)


def verify_tensor_transpose(X: npt.ArrayLike, Y: npt.ArrayLike) -> float:
    """
    Residual of U*(X^♯⊗Y^♯)U = (U*(X⊗Y)U)^T.

    Raises:
        ShapeError: If X or Y has odd dimension.
    """
    X, Y = as_square(X), as_square(Y)
    U = tensor_transpose_unitary(half_dim(X), half_dim(Y))
    Ustar = U.conj().T
    left = Ustar @ np.kron(dual(X), dual(Y)) @ U
    right = (Ustar @ np.kron(X, Y) @ U).T
    return norm(left - right)


def tensor_mixed_dual(X: npt.ArrayLike, Y: npt.ArrayLike) -> float:
    """
    Residual of X^T⊗Y^♯ = (X⊗Y)^♯ with ♯ taken against I⊗Z_M.

    Raises:
        ShapeError: If Y has odd dimension.
    """
    X, Y = as_square(X), as_square(Y)
    K = np.kron(np.eye(X.shape[0]), Z(half_dim(Y)))
    return norm(np.kron(X.T, dual(Y)) - dual_wrt(np.kron(X, Y), K))


@dataclass(frozen=True)
class TensorReport:
    """Both tensor identities evaluated on one pair."""

    transpose_residual: float
    mixed_residual: float
    scale: float

    def checks(self, tol: float) -> list[Check]:
        return [
            Check.relative(
                "U*(X^♯⊗Y^♯)U = (U*(X⊗Y)U)^T",
                self.transpose_residual,
                self.scale,
                tol,
                STRUCTURE_FACTOR,
            ),
            Check.relative(
                "X^T⊗Y^♯ = (X⊗Y)^♯", self.mixed_residual, self.scale, tol, STRUCTURE_FACTOR
            ),
        ]


def tensor_report(X: npt.ArrayLike, Y: npt.ArrayLike) -> TensorReport:
    X, Y = as_square(X), as_square(Y)
    mixed = tensor_mixed_dual(X, Y)
    transpose = verify_tensor_transpose(X, Y) if X.shape[0] % 2 == 0 else 0.0
    return TensorReport(
        transpose_residual=transpose,
        mixed_residual=mixed,
        scale=max(1.0, norm(X) * norm(Y)),
    )


def verify_triple_dual(X: npt.ArrayLike, Y: npt.ArrayLike, W: npt.ArrayLike) -> float:
    """
    Residual of V*(X^♯⊗Y^♯⊗W^♯)V = (V*(X⊗Y⊗W)V)^♯ with V = U⊗I.

    U is the transpose unitary for X and Y, and the dual on the right is taken
    against I⊗Z_P, so three duals turn into one dual of the large matrix.

    Raises:
        ShapeError: If X, Y or W has odd dimension.
    """
    X, Y, W = as_square(X), as_square(Y), as_square(W)
    V = np.kron(tensor_transpose_unitary(half_dim(X), half_dim(Y)), np.eye(W.shape[0]))
    Vstar = V.conj().T
    left = Vstar @ np.kron(np.kron(dual(X), dual(Y)), dual(W)) @ V
    K = np.kron(np.eye(V.shape[0]), Z(half_dim(W)))
    right = dual_wrt(Vstar @ np.kron(np.kron(X, Y), W) @ V, K)
    return norm(left - right)
