"""Unstructured dense complex kernels used by every factorization module."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.config import (
    COMMUTATOR_TOL,
    EIGEN_SLACK,
    RANK_TOL,
    STRUCTURE_TOL,
    ZERO_CUT,
)
from src.embedding import CMatrix, as_square, scale_of
from src.errors import (
    NoConvergence,
    NotCommuting,
    NotHermitian,
    NotPositiveSemidefinite,
    ShapeError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigResult:
    """Eigenvalues and the matching eigenvector columns."""

    values: npt.NDArray
    vectors: CMatrix

    def residual(self, H: CMatrix) -> float:
        return float(np.linalg.norm(H @ self.vectors - self.vectors * self.values))


def make_rng(seed: int | None) -> np.random.Generator:
    """Counter-based generator so every random step is reproducible from a seed."""
    return np.random.Generator(np.random.Philox(seed))


def hermitian_eig(H: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> EigResult:
    """
    Eigen-decompose a Hermitian matrix.

    Returns:
        Real eigenvalues in ascending order with orthonormal eigenvectors.

    Raises:
        NotHermitian: If ‖H − H*‖_F exceeds tol·max(1, ‖H‖_F).
    """
    H = as_square(H)
    deviation = float(np.linalg.norm(H - H.conj().T))
    threshold = tol * scale_of(H)
    if deviation > threshold:
        raise NotHermitian(
            f"matrix is not Hermitian: ‖H − H*‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    try:
        values, vectors = scipy.linalg.eigh(0.5 * (H + H.conj().T))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"Hermitian eigensolver failed: {exc}") from exc
    return EigResult(values=values, vectors=vectors)


def check_commuting(family: Sequence[CMatrix], tol: float = COMMUTATOR_TOL) -> None:
    """
    Raise NotCommuting unless ‖XY − YX‖ ≤ tol·‖X‖‖Y‖ for every pair.
    """
    for i, X in enumerate(family):
        for Y in family[i + 1 :]:
            deviation = float(np.linalg.norm(X @ Y - Y @ X))
            threshold = tol * max(1.0, float(np.linalg.norm(X)) * float(np.linalg.norm(Y)))
            if deviation > threshold:
                raise NotCommuting(
                    f"family does not commute: ‖XY − YX‖ = {deviation:.3e} > {threshold:.3e}",
                    deviation,
                    threshold,
                )


def _is_scalar(R: CMatrix, tol: float) -> bool:
    d = R.shape[0]
    return float(np.linalg.norm(R - (np.trace(R) / d) * np.eye(d))) <= tol * scale_of(R)


def _eigenspace(C: CMatrix) -> CMatrix:
    """Orthonormal basis of the eigenspace of C at its largest (Re, Im) eigenvalue."""
    values = scipy.linalg.eigvals(C)
    mu = max(values, key=lambda z: (round(z.real, 12), z.imag))
    shifted = C - mu * np.eye(C.shape[0])
    _, s, vh = scipy.linalg.svd(shifted)
    threshold = 1e-8 * max(1.0, float(s[0]) if s.size else 0.0, abs(mu))
    kernel = vh[s <= threshold].conj().T
    if kernel.shape[1] == 0:
        kernel = vh[-1:].conj().T
    return kernel


def common_eigenvector(
    family: Sequence[npt.ArrayLike],
    tol: float = COMMUTATOR_TOL,
    seed: int | None = 0,
    slack: float = EIGEN_SLACK,
    check: bool = True,
) -> tuple[npt.NDArray[np.complex128], list[complex]]:
    """
    Find a unit vector that is an eigenvector of every matrix in a commuting family.

    A random real combination of the family, restricted to the current
    invariant subspace, is split at one of its eigenvalues; the eigenspace is
    invariant under the whole family, so the search recurses inside it until
    every restricted matrix is scalar.

    Args:
        family: Pairwise commuting square matrices of one size.
        tol: Relative commutator tolerance.
        seed: Seed for the random combinations.
        slack: Residual slack κ; each ‖X_j v − λ_j v‖ must stay below κ·tol·‖X_j‖.
        check: Verify commutativity first.

    Returns:
        (v, lambdas) with lambdas[j] = v* X_j v.

    Raises:
        NotCommuting: If some pair fails the commutator test.
        NoConvergence: If the residual bound is not met.
    """
    mats = [as_square(X) for X in family]
    if not mats:
        raise ShapeError("common_eigenvector needs at least one matrix")
    n = mats[0].shape[0]
    if any(X.shape != (n, n) for X in mats):
        raise ShapeError("family members differ in shape")
    if check:
        check_commuting(mats, tol)

    rng = make_rng(seed)
    basis = np.eye(n, dtype=complex)
    while basis.shape[1] > 1:
        restricted = [basis.conj().T @ X @ basis for X in mats]
        nonscalar = [R for R in restricted if not _is_scalar(R, tol)]
        if not nonscalar:
            break
        coeffs = rng.standard_normal(len(restricted))
        combination = sum(c * R for c, R in zip(coeffs, restricted))
        kernel = None
        for C in [combination, *nonscalar]:
            candidate = _eigenspace(C)
            if candidate.shape[1] < basis.shape[1]:
                kernel = candidate
                break
        if kernel is None:
            break
        q, _ = np.linalg.qr(basis @ kernel)
        basis = q
        logger.debug("common eigenvector search narrowed to dimension %d", basis.shape[1])

    v = basis[:, 0]
    v = v / np.linalg.norm(v)
    lambdas = [complex(v.conj() @ X @ v) for X in mats]
    for X, lam in zip(mats, lambdas):
        residual = float(np.linalg.norm(X @ v - lam * v))
        bound = slack * tol * scale_of(X)
        if residual > bound:
            raise NoConvergence(
                f"common eigenvector residual {residual:.3e} exceeds {bound:.3e}"
            )
    return v, lambdas


def svd_complex(X: npt.ArrayLike) -> tuple[CMatrix, npt.NDArray[np.float64], CMatrix]:
    """
    Singular value decomposition X = U diag(s) V*.

    Returns:
        (U, s, V) with s nonnegative and descending.

    Raises:
        NoConvergence: If the LAPACK driver fails.
    """
    X = np.asarray(X, dtype=complex)
    try:
        U, s, Vh = scipy.linalg.svd(X)
    except np.linalg.LinAlgError:
        try:
            U, s, Vh = scipy.linalg.svd(X, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"SVD did not converge: {exc}") from exc
    return U, s, Vh.conj().T


def herm_fun(
    H: npt.ArrayLike,
    f: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]],
    zero_cut: float = ZERO_CUT,
    tol: float = STRUCTURE_TOL,
) -> CMatrix:
    """
    Apply a real function to a Hermitian positive semidefinite matrix.

    Eigenvalues at or below zero_cut·λ_max are treated as 0 and contribute
    nothing, which is the functional calculus for f with f(0) = 0.

    Args:
        H: Hermitian positive semidefinite matrix.
        f: Vectorized real function on the positive reals.
        zero_cut: Relative eigenvalue cut.
        tol: Relative tolerance for the Hermitian and PSD checks.

    Returns:
        Q f(Λ) Q*.

    Raises:
        NotHermitian: If H is not Hermitian.
        NotPositiveSemidefinite: If an eigenvalue is clearly negative.
    """
    eig = hermitian_eig(H, tol)
    values = eig.values
    top = float(np.max(np.abs(values))) if values.size else 0.0
    floor = -tol * max(1.0, top)
    if values.size and values[0] < floor:
        raise NotPositiveSemidefinite(
            f"matrix has negative eigenvalue {values[0]:.3e}",
            float(-values[0]),
            float(-floor),
        )
    keep = values > zero_cut * top
    fvals = np.zeros_like(values)
    if np.any(keep):
        fvals[keep] = np.asarray(f(values[keep]), dtype=float)
    Q = eig.vectors
    return (Q * fvals) @ Q.conj().T


def nullspace(
    X: npt.ArrayLike, tol: float = RANK_TOL, atol: float | None = None
) -> CMatrix:
    """
    Orthonormal basis of ker(X).

    The kernel dimension counts singular values at most tol·σ_max, or at
    most atol when an absolute threshold is given.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2:
        raise ShapeError(f"nullspace expects a matrix, got shape {X.shape}")
    _, s, V = svd_complex(X)
    threshold = atol if atol is not None else tol * (float(s[0]) if s.size else 0.0)
    padded = np.zeros(X.shape[1])
    padded[: s.size] = s
    return V[:, padded <= threshold]


def range_basis(
    X: npt.ArrayLike, tol: float = RANK_TOL, atol: float | None = None
) -> CMatrix:
    """Orthonormal basis of the column space of X at the same rank threshold as nullspace."""
    X = np.asarray(X, dtype=complex)
    U, s, _ = svd_complex(X)
    threshold = atol if atol is not None else tol * (float(s[0]) if s.size else 0.0)
    return U[:, : int(np.sum(s > threshold))]
