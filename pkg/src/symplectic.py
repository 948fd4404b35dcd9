"""Kramers-paired bases, symplectic completion and partial-isometry extensions."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.config import ORTHOGONALITY_TOL, PARTIAL_ISOMETRY_TOL, STRUCTURE_TOL, UNIT_TOL
from src.embedding import (
    CMatrix,
    apply_T,
    as_square,
    ensure_quaternionic,
    ensure_selfdual,
    ensure_symmetric,
    half_dim,
)
from src.errors import NotOrthogonal, NotPartialIsometry, NotUnit, OddKernel, ShapeError
from src.kernels import nullspace

logger = logging.getLogger(__name__)

# Singular values of a partial isometry are 0 or 1; split them halfway.
ISOMETRY_KERNEL_CUT = 0.5


@dataclass(frozen=True)
class KramersBasis:
    """
    Orthonormal basis made of pairs (v_k, 𝒯v_k).

    Attributes:
        heads: Columns v_1..v_m; the partners are apply_T of these.
    """

    heads: CMatrix

    @property
    def partners(self) -> CMatrix:
        return apply_T(self.heads)

    @property
    def pairs(self) -> list[tuple[npt.NDArray, npt.NDArray]]:
        partners = self.partners
        return [(self.heads[:, k], partners[:, k]) for k in range(self.heads.shape[1])]

    def as_unitary(self) -> CMatrix:
        """Columns [v_1..v_m, 𝒯v_1..𝒯v_m]."""
        return np.concatenate([self.heads, self.partners], axis=1)


def kramers_basis(
    space: npt.ArrayLike, start: npt.ArrayLike | None = None
) -> KramersBasis:
    """
    Build a Kramers-paired orthonormal basis of a 𝒯-invariant subspace.

    Greedy order: each new head is the candidate column with the largest
    residual after projecting out every chosen vector and its partner.

    Args:
        space: Orthonormal columns spanning a 𝒯-invariant subspace of even dimension.
        start: Optional first head, a unit vector inside the subspace.

    Raises:
        OddKernel: If the subspace dimension is odd.
    """
    space = np.asarray(space, dtype=complex)
    dim2n, dim = space.shape
    if dim % 2:
        raise OddKernel(f"subspace of odd dimension {dim} cannot carry Kramers pairs")
    m = dim // 2
    chosen = np.zeros((dim2n, 0), dtype=complex)
    heads: list[npt.NDArray] = []

    def _append(u: npt.NDArray) -> None:
        nonlocal chosen
        for _ in range(2):
            u = u - chosen @ (chosen.conj().T @ u)
        u = u / np.linalg.norm(u)
        heads.append(u)
        chosen = np.concatenate([chosen, u[:, None], apply_T(u)[:, None]], axis=1)

    if start is not None:
        _append(np.asarray(start, dtype=complex).reshape(-1))
    while len(heads) < m:
        residuals = space - chosen @ (chosen.conj().T @ space)
        norms = np.linalg.norm(residuals, axis=0)
        _append(residuals[:, int(np.argmax(norms))])
    return KramersBasis(heads=np.stack(heads, axis=1) if heads else np.zeros((dim2n, 0), complex))


def complete_symplectic(v: npt.ArrayLike, tol: float = UNIT_TOL) -> CMatrix:
    """
    Return a symplectic unitary U with U e_1 = v.

    Column N+1 of U is 𝒯v; the remaining columns come from a greedy Kramers
    completion over the standard basis, so v = e_1 gives U = I.

    Raises:
        ShapeError: If v has odd length.
        NotUnit: If ‖v‖ differs from 1 by more than tol.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    n = half_dim(v)
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > tol:
        raise NotUnit(f"vector norm {norm!r} is not 1", abs(norm - 1.0), tol)
    basis = kramers_basis(np.eye(2 * n, dtype=complex), start=v)
    U = basis.as_unitary()
    U[:, 0] = v
    return U


def partial_isometry_defect(W: CMatrix) -> float:
    P = W.conj().T @ W
    return float(np.linalg.norm(P @ P - P))


def ensure_partial_isometry(W: npt.ArrayLike, tol: float = PARTIAL_ISOMETRY_TOL) -> CMatrix:
    """
    Validate (W*W)² = W*W within tol·max(1, ‖W‖_F²).

    Raises:
        NotPartialIsometry: On failure.
    """
    W = as_square(W)
    deviation = partial_isometry_defect(W)
    threshold = tol * max(1.0, float(np.linalg.norm(W)) ** 2)
    if deviation > threshold:
        raise NotPartialIsometry(
            f"not a partial isometry: ‖(W*W)² − W*W‖ = {deviation:.3e} > {threshold:.3e}",
            deviation,
            threshold,
        )
    return W


def extend_quaternionic_isometry(
    W: npt.ArrayLike,
    tol: float = PARTIAL_ISOMETRY_TOL,
    structure_tol: float = STRUCTURE_TOL,
) -> CMatrix:
    """
    Extend a quaternionic partial isometry to a symplectic unitary.

    A Kramers basis {v_j, 𝒯v_j} of ker W is sent to a Kramers basis
    {w_j, 𝒯w_j} of ker W*.

    Raises:
        NotQuaternionic: If W* ≠ W^♯.
        NotPartialIsometry: If W is not a partial isometry.
        OddKernel: If a kernel has odd dimension.
    """
    W = ensure_quaternionic(W, structure_tol)
    ensure_partial_isometry(W, tol)
    K = nullspace(W, atol=ISOMETRY_KERNEL_CUT)
    L = nullspace(W.conj().T, atol=ISOMETRY_KERNEL_CUT)
    if K.shape[1] != L.shape[1]:
        raise NotPartialIsometry(
            f"kernel dimensions of W and W* differ: {K.shape[1]} vs {L.shape[1]}"
        )
    logger.debug("extending quaternionic isometry across a kernel of dimension %d", K.shape[1])
    if K.shape[1] == 0:
        return W.copy()
    source = kramers_basis(K)
    target = kramers_basis(L)
    V = target.heads @ source.heads.conj().T + target.partners @ source.partners.conj().T
    return W + V


def extend_symmetric_isometry(
    W: npt.ArrayLike,
    tol: float = PARTIAL_ISOMETRY_TOL,
    structure_tol: float = STRUCTURE_TOL,
) -> CMatrix:
    """
    Extend a symmetric partial isometry to a symmetric unitary.

    An orthonormal basis v_j of ker W is sent to conj(v_j), which spans ker W*.

    Raises:
        NotSymmetric: If W^T ≠ W.
        NotPartialIsometry: If W is not a partial isometry.
    """
    W = ensure_symmetric(W, structure_tol)
    ensure_partial_isometry(W, tol)
    K = nullspace(W, atol=ISOMETRY_KERNEL_CUT)
    if K.shape[1] == 0:
        return W.copy()
    return W + K.conj() @ K.conj().T


def kramers_rank2_isometry(
    v: npt.ArrayLike, w: npt.ArrayLike, tol: float = ORTHOGONALITY_TOL
) -> CMatrix:
    """
    Self-dual partial isometry sending v to 𝒯w and w to −𝒯v.

    V = 𝒯w v* − 𝒯v w*, which vanishes on the complement of span{v, w}.

    Raises:
        NotOrthogonal: If |⟨v, w⟩| exceeds tol.
        NotUnit: If v or w is not a unit vector.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    w = np.asarray(w, dtype=complex).reshape(-1)
    if v.shape != w.shape:
        raise ShapeError(f"vectors differ in length: {v.shape[0]} vs {w.shape[0]}")
    half_dim(v)
    for name, x in (("v", v), ("w", w)):
        norm = float(np.linalg.norm(x))
        if abs(norm - 1.0) > STRUCTURE_TOL:
            raise NotUnit(
                f"{name} has norm {norm!r}, expected 1", abs(norm - 1.0), STRUCTURE_TOL
            )
    overlap = abs(complex(np.vdot(v, w)))
    if overlap > tol:
        raise NotOrthogonal(f"vectors are not orthogonal: |⟨v, w⟩| = {overlap:.3e}", overlap, tol)
    Tv, Tw = apply_T(v), apply_T(w)
    return np.outer(Tw, v.conj()) - np.outer(Tv, w.conj())


def extend_selfdual_isometry(
    W: npt.ArrayLike,
    tol: float = PARTIAL_ISOMETRY_TOL,
    structure_tol: float = STRUCTURE_TOL,
) -> CMatrix:
    """
    Extend a self-dual partial isometry to a self-dual unitary U = W + V.

    Consecutive orthonormal kernel vectors are paired and each pair
    contributes one rank-2 Kramers isometry to V.

    Raises:
        NotSelfDual: If W^♯ ≠ W.
        NotPartialIsometry: If W is not a partial isometry.
        OddKernel: If ker W has odd dimension (a tolerance failure).
    """
    W = ensure_selfdual(W, structure_tol)
    ensure_partial_isometry(W, tol)
    K = nullspace(W, atol=ISOMETRY_KERNEL_CUT)
    if K.shape[1] % 2:
        raise OddKernel(f"kernel of a self-dual partial isometry has odd dimension {K.shape[1]}")
    V = np.zeros_like(W)
    for j in range(0, K.shape[1], 2):
        V = V + kramers_rank2_isometry(K[:, j], K[:, j + 1], tol=1e-10)
    return W + V
