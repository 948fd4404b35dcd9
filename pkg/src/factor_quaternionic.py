"""
Structured factorizations of quaternionic matrices.

Every routine works on the χ-image X ∈ 𝐌_{2N}(ℂ) with X* = X^♯ and returns
symplectic unitary factors, so the results pull back to quaternion matrices.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.checks import (
    DETERMINANT_FACTOR,
    RECONSTRUCTION_FACTOR,
    STRUCTURE_FACTOR,
    TRIANGULAR_FACTOR,
    Check,
    lower_defect,
    norm,
    unitary_defect,
)
from src.config import COMMUTATOR_TOL, NORMALITY_TOL, RANK_TOL, STRUCTURE_TOL
from src.embedding import (
    CMatrix,
    Z,
    apply_T,
    as_square,
    chi,
    chi_inv,
    classify,
    dual,
    ensure_quaternionic,
    pullback_vector,
    quaternionic_split,
    scale_of,
)
from src.errors import NotNormal, NotSymplectic
from src.kernels import check_commuting, common_eigenvector, svd_complex
from src.quaternion import QuatMatrix, qvec_norm
from src.symplectic import complete_symplectic, extend_quaternionic_isometry

logger = logging.getLogger(__name__)


def symplectic_defect(U: npt.ArrayLike) -> float:
    U = np.asarray(U)
    Zn = Z(U.shape[0] // 2)
    return norm(U.T @ Zn @ U - Zn)


def embed_block(n: int, keep: npt.NDArray[np.intp], block: CMatrix) -> CMatrix:
    """Identity of size n with `block` placed on the rows and columns `keep`."""
    out = np.eye(n, dtype=complex)
    out[np.ix_(keep, keep)] = block
    return out


def active_indices(n: int, k: int) -> npt.NDArray[np.intp]:
    """Indices k..N-1 and N+k..2N-1 of a 2N-dimensional space."""
    return np.concatenate([np.arange(k, n), np.arange(n + k, 2 * n)])


def unitary_checks(prefix: str, U: CMatrix, tol: float) -> list[Check]:
    """Unitarity, symplecticity and det U = 1 for a symplectic unitary factor."""
    scale = scale_of(U)
    det = complex(scipy.linalg.det(U))
    return [
        Check.relative(f"{prefix} unitary", unitary_defect(U), scale, tol, STRUCTURE_FACTOR),
        Check.relative(f"{prefix} symplectic", symplectic_defect(U), scale, tol, STRUCTURE_FACTOR),
        Check(f"{prefix} determinant one", abs(det - 1.0), DETERMINANT_FACTOR * tol),
    ]


def deflate_commuting(
    Xs: Sequence[CMatrix], seed: int = 0, conjugate_upper: bool = True
) -> CMatrix:
    """
    Symplectic unitary U that deflates a commuting quaternionic family.

    A common eigenvector v and its partner 𝒯v become columns 1 and N+1 of a
    symplectic completion; rows and columns 1 and N+1 are then removed and the
    remaining 2(N−1)-dimensional family is deflated the same way.

    Args:
        Xs: Commuting family sharing the 𝒯-symmetry used for the partner column.
        seed: Seed for the random combinations, advanced per level.
        conjugate_upper: Swap v for 𝒯v when the first eigenvalue lies below the real axis.
    """
    n2 = Xs[0].shape[0]
    n = n2 // 2
    U = np.eye(n2, dtype=complex)
    current = [np.asarray(X, dtype=complex) for X in Xs]
    for k in range(n):
        keep = active_indices(n, k)
        block = [(U.conj().T @ X @ U)[np.ix_(keep, keep)] for X in current]
        v, lambdas = common_eigenvector(block, seed=seed + k, check=False)
        if conjugate_upper and lambdas[0].imag < 0:
            v = apply_T(v)
        logger.debug("deflation level %d: eigenvalues %s", k, np.round(lambdas, 6))
        U = U @ embed_block(n2, keep, complete_symplectic(v / np.linalg.norm(v), tol=1e-8))
    return U


@dataclass(frozen=True)
class QuatSchurResult:
    """
    U*X_jU = [[T_j, S_j], [−conj(S_j), conj(T_j)]] with a single symplectic U.

    Attributes:
        U: Symplectic unitary.
        T: Upper-triangular blocks, one per input.
        S: Strictly upper-triangular blocks, one per input.
        residuals: ‖U*X_jU − block form‖_F per input.
        triangular_defects: Norm of the discarded lower parts per input.
        scales: max(1, ‖X_j‖_F) per input.
    """

    U: CMatrix
    T: list[CMatrix]
    S: list[CMatrix]
    residuals: list[float]
    triangular_defects: list[float]
    scales: list[float]

    @property
    def blocks(self) -> list[tuple[CMatrix, CMatrix]]:
        return list(zip(self.T, self.S))

    def block_form(self, j: int = 0) -> CMatrix:
        T, S = self.T[j], self.S[j]
        return np.block([[T, S], [-S.conj(), T.conj()]])

    def quaternion_triangular(self, j: int = 0) -> QuatMatrix:
        """The upper-triangular quaternion matrix T_j + S_j ĵ."""
        return QuatMatrix.from_complex_parts(self.T[j], self.S[j])

    def diagonal(self, j: int = 0) -> npt.NDArray[np.complex128]:
        return np.diag(self.T[j]).copy()

    def checks(self, tol: float) -> list[Check]:
        out = unitary_checks("U", self.U, tol)
        for j, (res, tri, scale) in enumerate(
            zip(self.residuals, self.triangular_defects, self.scales)
        ):
            out.append(
                Check.relative(f"X{j} reconstruction", res, scale, tol, RECONSTRUCTION_FACTOR)
            )
            out.append(Check.relative(f"X{j} triangular", tri, scale, tol, TRIANGULAR_FACTOR))
        return out


def schur_commuting(
    Xs: Sequence[npt.ArrayLike],
    seed: int = 0,
    tol: float = STRUCTURE_TOL,
    commutator_tol: float = COMMUTATOR_TOL,
) -> QuatSchurResult:
    """
    Simultaneous quaternionic Schur form of a commuting quaternionic family.

    Args:
        Xs: Quaternionic matrices, pairwise commuting.
        seed: Seed for the deflation.
        tol: Relative tolerance for the quaternionic condition.
        commutator_tol: Relative commutator tolerance.

    Returns:
        QuatSchurResult with a symplectic unitary U.

    Raises:
        NotQuaternionic: If some X_j is not quaternionic.
        NotCommuting: If the family does not commute.
    """
    mats = [ensure_quaternionic(X, tol) for X in Xs]
    check_commuting(mats, commutator_tol)
    n = mats[0].shape[0] // 2
    U = deflate_commuting(mats, seed=seed)

    T, S, residuals, defects, scales = [], [], [], [], []
    for X in mats:
        M = U.conj().T @ X @ U
        Tj = np.triu(M[:n, :n])
        Sj = np.triu(M[:n, n:], 1)
        form = np.block([[Tj, Sj], [-Sj.conj(), Tj.conj()]])
        T.append(Tj)
        S.append(Sj)
        residuals.append(norm(M - form))
        defects.append(lower_defect(M[:n, :n], -1) + lower_defect(M[:n, n:], 0))
        scales.append(scale_of(X))
    logger.info("quaternionic Schur form of %d matrices, N=%d", len(mats), n)
    return QuatSchurResult(U, T, S, residuals, defects, scales)


@dataclass(frozen=True)
class SpectralResult:
    """U*X_jU = diag(D_j, conj(D_j)) for a commuting normal family."""

    U: CMatrix
    D: list[npt.NDArray[np.complex128]]
    residuals: list[float]
    scales: list[float]

    def diagonal_form(self, j: int = 0) -> CMatrix:
        return np.diag(np.concatenate([self.D[j], self.D[j].conj()]))

    def checks(self, tol: float) -> list[Check]:
        out = unitary_checks("U", self.U, tol)
        for j, (res, scale) in enumerate(zip(self.residuals, self.scales)):
            out.append(
                Check.relative(f"X{j} diagonalization", res, scale, tol, RECONSTRUCTION_FACTOR)
            )
        return out


def diagonalize_commuting_normal(
    Xs: Sequence[npt.ArrayLike],
    seed: int = 0,
    tol: float = STRUCTURE_TOL,
    normality_tol: float = NORMALITY_TOL,
) -> SpectralResult:
    """
    Diagonalize a commuting family of normal quaternionic matrices.

    Raises:
        NotNormal: If ‖XX* − X*X‖ > normality_tol·‖X‖² for some member.
        NotQuaternionic, NotCommuting: As for schur_commuting.
    """
    for X in Xs:
        X = as_square(X)
        deviation = norm(X @ X.conj().T - X.conj().T @ X)
        threshold = normality_tol * max(1.0, norm(X) ** 2)
        if deviation > threshold:
            raise NotNormal(
                f"matrix is not normal: ‖XX* − X*X‖ = {deviation:.3e} > {threshold:.3e}",
                deviation,
                threshold,
            )
    schur = schur_commuting(Xs, seed=seed, tol=tol)
    D, residuals = [], []
    for X, Tj in zip(Xs, schur.T):
        d = np.diag(Tj).copy()
        form = np.diag(np.concatenate([d, d.conj()]))
        residuals.append(norm(schur.U.conj().T @ np.asarray(X) @ schur.U - form))
        D.append(d)
    return SpectralResult(schur.U, D, residuals, schur.scales)


def symplectic_det_check(U: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> complex:
    """
    Determinant of a symplectic unitary (equal to 1 up to rounding).

    Raises:
        NotSymplectic: If U is not a symplectic unitary within tol.
    """
    U = as_square(U)
    report = classify(U, tol)
    if not (report.symplectic and report.unitary):
        deviation = max(report.deviations["symplectic"], report.deviations["unitary"])
        raise NotSymplectic(
            f"matrix is not a symplectic unitary (defect {deviation:.3e})",
            deviation,
            tol * report.scale,
        )
    return complex(scipy.linalg.det(U))


def _representative_indices(values: npt.NDArray[np.complex128], n: int, scale: float) -> list[int]:
    """
    Pick N eigenvalue indices, one per conjugate pair, with Im ≥ 0.

    Non-real values above the axis are taken directly; real values come in
    pairs, so every other one in sorted order is kept.
    """
    cut = 1e-8 * scale
    upper = [i for i, z in enumerate(values) if z.imag > cut]
    real = sorted((i for i, z in enumerate(values) if abs(z.imag) <= cut), key=lambda i: values[i].real)
    chosen = upper + real[::2]
    if len(chosen) != n or len(real) % 2:
        chosen = sorted(range(len(values)), key=lambda i: -values[i].imag)[:n]
    return sorted(chosen, key=lambda i: (values[i].real, values[i].imag))


def right_eigenvalues(Q: QuatMatrix) -> list[complex]:
    """
    Complex right eigenvalues of a quaternion matrix, via the eigenvalues of χ(Q).

    Returns:
        N representatives with Im ≥ 0 sorted by (Re, Im), then their conjugates
        in the same order.
    """
    C = chi(Q)
    values = scipy.linalg.eigvals(C)
    reps = [complex(values[i]) for i in _representative_indices(values, Q.rows, scale_of(C))]
    return reps + [z.conjugate() for z in reps]


@dataclass(frozen=True)
class RightEigenpair:
    """Q u = u λ for the quaternion vector u = v − ĵw."""

    value: complex
    vector: QuatMatrix
    residual: float


def right_eigenpairs(Q: QuatMatrix) -> list[RightEigenpair]:
    """
    Right eigenvalue representatives with quaternion eigenvectors.

    Each eigenvector [v; w] of χ(Q) pulls back to v − ĵw, which satisfies
    Q(v − ĵw) = (v − ĵw)λ.
    """
    C = chi(Q)
    values, vectors = scipy.linalg.eig(C)
    pairs = []
    for i in _representative_indices(values, Q.rows, scale_of(C)):
        lam = complex(values[i])
        u = pullback_vector(vectors[:, i] / np.linalg.norm(vectors[:, i]))
        residual = qvec_norm((Q @ u) - u.right_scale(lam)) / max(qvec_norm(u), 1e-300)
        pairs.append(RightEigenpair(lam, u, residual))
    return pairs


@dataclass(frozen=True)
class PolarResult:
    """
    X = UP = WP with P = (X*X)^{1/2} and W the minimal partial isometry.

    Attributes:
        variant: "quaternionic", "symmetric" or "selfdual"; selects the
            structure required of U and W.
        reconstruction: ‖X − UP‖_F.
        minimal_reconstruction: ‖X − WP‖_F.
        scale: max(1, ‖X‖_F).
        companion: ‖|X*| − |X|^T‖_F for the symmetric variant.
    """

    U: CMatrix
    P: CMatrix
    W: CMatrix
    variant: str
    reconstruction: float
    minimal_reconstruction: float
    scale: float
    companion: float | None = None

    def support_defect(self) -> float:
        """‖W*W − projection onto the support of P‖_F."""
        values, vectors = np.linalg.eigh(0.5 * (self.P + self.P.conj().T))
        top = float(np.max(np.abs(values))) if values.size else 0.0
        support = vectors[:, values > RANK_TOL * max(top, 1e-300)]
        return norm(self.W.conj().T @ self.W - support @ support.conj().T)

    def checks(self, tol: float) -> list[Check]:
        U, P, W = self.U, self.P, self.W
        p_scale = scale_of(P)
        min_eig = float(np.linalg.eigvalsh(0.5 * (P + P.conj().T))[0])
        out = [
            Check.relative("X = UP", self.reconstruction, self.scale, tol, RECONSTRUCTION_FACTOR),
            Check.relative(
                "X = WP", self.minimal_reconstruction, self.scale, tol, RECONSTRUCTION_FACTOR
            ),
            Check.relative("U unitary", unitary_defect(U), scale_of(U), tol, STRUCTURE_FACTOR),
            Check.relative("P hermitian", norm(P - P.conj().T), p_scale, tol, STRUCTURE_FACTOR),
            Check.relative("P positive", max(0.0, -min_eig), p_scale, tol, STRUCTURE_FACTOR),
            Check.relative(
                "W*W support", self.support_defect(), scale_of(W), tol, RECONSTRUCTION_FACTOR
            ),
        ]
        if self.variant == "quaternionic":
            out += [
                Check.relative("U symplectic", symplectic_defect(U), scale_of(U), tol),
                Check.relative("P quaternionic", norm(P.conj().T - dual(P)), p_scale, tol),
            ]
        elif self.variant == "symmetric":
            out += [
                Check.relative("U symmetric", norm(U - U.T), scale_of(U), tol),
                Check.relative("W symmetric", norm(W - W.T), scale_of(W), tol),
            ]
            if self.companion is not None:
                out.append(
                    Check.relative(
                        "|X*| = |X|^T", self.companion, p_scale, tol, RECONSTRUCTION_FACTOR
                    )
                )
        elif self.variant == "selfdual":
            out += [
                Check.relative("U self-dual", norm(U - dual(U)), scale_of(U), tol),
                Check.relative("W self-dual", norm(W - dual(W)), scale_of(W), tol),
            ]
        return out


def minimal_polar(X: CMatrix, rank_tol: float = RANK_TOL) -> tuple[CMatrix, CMatrix]:
    """
    Return (W, P) with P = (X*X)^{1/2} and W the partial isometry X = WP.

    Both come from one SVD, so the support of W is decided on the singular
    values at rank_tol·σ_max rather than on the eigenvalues of X*X.
    """
    U, s, V = svd_complex(X)
    keep = s > rank_tol * (float(s[0]) if s.size else 0.0)
    W = U[:, keep] @ V[:, keep].conj().T
    P = (V * s) @ V.conj().T
    return W, 0.5 * (P + P.conj().T)



def polar_quaternionic(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> PolarResult:
    """
    Polar decomposition X = UP with U symplectic unitary and P quaternionic PSD.

    Raises:
        NotQuaternionic: If X is not quaternionic.
    """
    X = ensure_quaternionic(X, tol)
    W, P = minimal_polar(X)
    W, _ = quaternionic_split(W)
    P, _ = quaternionic_split(P)
    U = extend_quaternionic_isometry(W, structure_tol=max(tol, 1e-8))
    return PolarResult(
        U=U,
        P=P,
        W=W,
        variant="quaternionic",
        reconstruction=norm(X - U @ P),
        minimal_reconstruction=norm(X - W @ P),
        scale=scale_of(X),
    )


def _kramers_permutation(order: npt.NDArray[np.intp], n: int) -> npt.NDArray[np.intp]:
    """Apply the same permutation to the upper and lower index blocks."""
    return np.concatenate([order, order + n])


@dataclass(frozen=True)
class QuatSVDResult:
    """
    X = U D V with symplectic unitaries U, V and D = diag(s, s), s descending.
    """

    U: CMatrix
    D: CMatrix
    V: CMatrix
    singular_values: npt.NDArray[np.float64]
    residual: float
    scale: float
    reference: npt.NDArray[np.float64] = field(repr=False, default_factory=lambda: np.zeros(0))

    def checks(self, tol: float) -> list[Check]:
        D = self.D
        d = np.diag(D).real
        s = np.sort(self.reference)[::-1]
        pairing = float(np.max(np.abs(s[0::2] - s[1::2]))) if s.size else 0.0
        doubled = np.repeat(self.singular_values, 2)
        return [
            Check.relative("X = UDV", self.residual, self.scale, tol, RECONSTRUCTION_FACTOR),
            *unitary_checks("U", self.U, tol),
            *unitary_checks("V", self.V, tol),
            Check.relative(
                "D real diagonal", norm(D - np.diag(d)), scale_of(D), tol, STRUCTURE_FACTOR
            ),
            Check.relative("D nonnegative", max(0.0, -float(np.min(d))), scale_of(D), tol),
            Check.relative("D^♯ = D*", norm(dual(D) - D.conj().T), scale_of(D), tol),
            Check.relative(
                "even multiplicity", pairing, self.scale, tol, RECONSTRUCTION_FACTOR
            ),
            Check.relative(
                "matches unstructured SVD",
                norm(doubled - s),
                self.scale,
                tol,
                RECONSTRUCTION_FACTOR,
            ),
        ]


def svd_quaternionic(
    X: npt.ArrayLike, seed: int = 0, tol: float = STRUCTURE_TOL
) -> QuatSVDResult:
    """
    Quaternionic SVD X = U D V.

    The polar factor P is diagonalized by a symplectic unitary Q, giving
    X = (U_polar Q) D Q*, then the Kramers pairs are sorted by singular value.

    Raises:
        NotQuaternionic: If X is not quaternionic.
    """
    X = ensure_quaternionic(X, tol)
    n = X.shape[0] // 2
    polar = polar_quaternionic(X, tol)
    spectral = diagonalize_commuting_normal([polar.P], seed=seed, tol=max(tol, 1e-8))
    s = np.abs(spectral.D[0].real)
    order = np.argsort(-s, kind="stable")
    perm = _kramers_permutation(order, n)
    Q = spectral.U[:, perm]
    s = s[order]
    D = np.diag(np.concatenate([s, s])).astype(complex)
    U = polar.U @ Q
    V = Q.conj().T
    _, reference, _ = svd_complex(X)
    return QuatSVDResult(
        U=U,
        D=D,
        V=V,
        singular_values=s,
        residual=norm(X - U @ D @ V),
        scale=scale_of(X),
        reference=reference,
    )


@dataclass(frozen=True)
class QRResult:
    """
    X = QR with Q symplectic unitary and R = [[A, B], [−conj(B), conj(A)]],
    A and B upper triangular.
    """

    Q: CMatrix
    A: CMatrix
    B: CMatrix
    residual: float
    triangular_defect: float
    scale: float

    @property
    def R(self) -> CMatrix:
        return np.block([[self.A, self.B], [-self.B.conj(), self.A.conj()]])

    def quaternion_factors(self) -> tuple[QuatMatrix, QuatMatrix]:
        """Q and R as quaternion matrices; the second is upper triangular over ℍ."""
        return chi_inv(self.Q, tol=1e-8), QuatMatrix.from_complex_parts(self.A, self.B)

    def checks(self, tol: float) -> list[Check]:
        return [
            Check.relative("X = QR", self.residual, self.scale, tol, RECONSTRUCTION_FACTOR),
            *unitary_checks("Q", self.Q, tol),
            Check.relative(
                "R triangular", self.triangular_defect, self.scale, tol, TRIANGULAR_FACTOR
            ),
        ]


def qr_quaternionic(X: npt.ArrayLike, tol: float = STRUCTURE_TOL) -> QRResult:
    """
    Quaternionic QR by column-wise symplectic deflation.

    At step k the active column k is rotated onto e_k by a symplectic
    completion; quaternionic structure sends column N+k onto e_{N+k} at the
    same time.

    Raises:
        NotQuaternionic: If X is not quaternionic.
    """
    X = ensure_quaternionic(X, tol)
    n2 = X.shape[0]
    n = n2 // 2
    scale = scale_of(X)
    M = X.copy()
    Q = np.eye(n2, dtype=complex)
    for k in range(n):
        keep = active_indices(n, k)
        column = M[keep, k]
        length = float(np.linalg.norm(column))
        if length <= 1e-14 * scale:
            logger.debug("qr step %d: zero column, identity rotation", k)
            continue
        G = embed_block(n2, keep, complete_symplectic(column / length, tol=1e-8))
        M = G.conj().T @ M
        Q = Q @ G
    A = np.triu(M[:n, :n])
    B = np.triu(M[:n, n:])
    R = np.block([[A, B], [-B.conj(), A.conj()]])
    defect = lower_defect(M[:n, :n], -1) + lower_defect(M[:n, n:], -1)
    return QRResult(
        Q=Q,
        A=A,
        B=B,
        residual=norm(X - Q @ R),
        triangular_defect=defect,
        scale=scale,
    )


def operator_norm(Q: QuatMatrix) -> float:
    """sup ‖Qv‖/‖v‖ over quaternion vectors, which equals σ_max(χ(Q))."""
    _, s, _ = svd_complex(chi(Q))
    return float(s[0])


@dataclass(frozen=True)
class NormWitness:
    """A quaternion vector at which ‖Qv‖/‖v‖ reaches the operator norm."""

    norm: float
    vector: QuatMatrix
    attained: float

    def checks(self, tol: float) -> list[Check]:
        gap = abs(self.attained - self.norm)
        return [Check.relative("witness attains norm", gap, self.norm, tol, RECONSTRUCTION_FACTOR)]


def operator_norm_witness(Q: QuatMatrix) -> NormWitness:
    """Pull back the top right singular vector [v; w] of χ(Q) to v − ĵw."""
    _, s, V = svd_complex(chi(Q))
    u = pullback_vector(V[:, 0])
    attained = qvec_norm(Q @ u) / qvec_norm(u)
    return NormWitness(norm=float(s[0]), vector=u, attained=attained)
