"""Seeded generators for every structure class, and residual reports."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt
import scipy.linalg

from src.checks import Check, HasChecks, all_passed
from src.embedding import CMatrix, chi, dual
from src.jordan import jordan_block
from src.kernels import make_rng
from src.quaternion import QuatMatrix
from src.symplectic import complete_symplectic


class StructureClass(Enum):
    """Structure classes the generators can produce."""

    QUATERNIONIC = "quaternionic"
    HERMITIAN_QUATERNIONIC = "hermitian-quaternionic"
    NORMAL_QUATERNIONIC = "normal-quaternionic"
    SELFDUAL = "selfdual"
    SYMMETRIC = "symmetric"
    SYMPLECTIC_UNITARY = "symplectic-unitary"
    COMMUTING_FAMILY = "commuting-family"
    QUATERNIONIC_PARTIAL_ISOMETRY = "quaternionic-partial-isometry"
    SELFDUAL_PARTIAL_ISOMETRY = "selfdual-partial-isometry"
    SYMMETRIC_PARTIAL_ISOMETRY = "symmetric-partial-isometry"


_EXPECTED_FLAGS = {
    StructureClass.QUATERNIONIC: {"quaternionic"},
    StructureClass.HERMITIAN_QUATERNIONIC: {"quaternionic", "hermitian", "normal"},
    StructureClass.NORMAL_QUATERNIONIC: {"quaternionic", "normal"},
    StructureClass.SELFDUAL: {"selfdual"},
    StructureClass.SYMMETRIC: {"symmetric"},
    StructureClass.SYMPLECTIC_UNITARY: {"quaternionic", "symplectic", "unitary", "normal"},
    StructureClass.QUATERNIONIC_PARTIAL_ISOMETRY: {"quaternionic"},
    StructureClass.SELFDUAL_PARTIAL_ISOMETRY: {"selfdual"},
    StructureClass.SYMMETRIC_PARTIAL_ISOMETRY: {"symmetric"},
}


@dataclass(frozen=True)
class GenSpec:
    """
    Recipe for a seeded random instance.

    Attributes:
        size: N; every generated matrix is 2N×2N.
        kind: Structure class to draw from.
        seed: Seed for the counter-based generator.
        family_size: Number of members for commuting families.
        base: Class of the matrix a commuting family is built from.
        rank: Number of Kramers pairs in the range (complex rank 2·rank);
            None means full rank, except partial isometries default to max(1, N // 2).
    """

    size: int
    kind: StructureClass = StructureClass.QUATERNIONIC
    seed: int = 0
    family_size: int = 3
    base: StructureClass = StructureClass.QUATERNIONIC
    rank: int | None = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"size must be at least 1, got {self.size}")
        if self.rank is not None and not 0 <= self.rank <= self.size:
            raise ValueError(f"rank must lie in [0, {self.size}], got {self.rank}")
        if self.family_size < 1:
            raise ValueError(f"family_size must be at least 1, got {self.family_size}")
        if self.base is StructureClass.COMMUTING_FAMILY:
            raise ValueError("a commuting family cannot be built on another family")


def expected_flags(kind: StructureClass) -> set[str]:
    """Flags classify must report for members of a class (per family member for families)."""
    return set(_EXPECTED_FLAGS.get(kind, set()))


def random_complex(rng: np.random.Generator, rows: int, cols: int | None = None) -> CMatrix:
    cols = rows if cols is None else cols
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_quaternion_matrix(rng: np.random.Generator, rows: int, cols: int | None = None) -> QuatMatrix:
    cols = rows if cols is None else cols
    return QuatMatrix(rng.standard_normal((rows, cols, 4)) / 2.0)


def random_unitary(rng: np.random.Generator, n: int) -> CMatrix:
    q, r = np.linalg.qr(random_complex(rng, n))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_unit_vector(rng: np.random.Generator, n: int) -> npt.NDArray[np.complex128]:
    v = random_complex(rng, n, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_symplectic_unitary(rng: np.random.Generator, n: int, factors: int = 3) -> CMatrix:
    """Product of symplectic completions of random unit vectors in ℂ^{2n}."""
    U = np.eye(2 * n, dtype=complex)
    for _ in range(factors):
        U = U @ complete_symplectic(random_unit_vector(rng, 2 * n))
    return U


def _mask(n: int, rank: int | None) -> npt.NDArray[np.float64]:
    keep = n if rank is None else rank
    return np.concatenate([np.ones(keep), np.zeros(n - keep)])


def _quaternionic(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    if rank is None:
        return chi(random_quaternion_matrix(rng, n))
    if rank == 0:
        return np.zeros((2 * n, 2 * n), dtype=complex)
    left = random_quaternion_matrix(rng, n, rank)
    right = random_quaternion_matrix(rng, rank, n)
    return chi(left @ right)


def _hermitian_quaternionic(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    if rank is None:
        Q = random_quaternion_matrix(rng, n)
        return chi(QuatMatrix(0.5 * (Q.coeffs + Q.adjoint().coeffs)))
    if rank == 0:
        return np.zeros((2 * n, 2 * n), dtype=complex)
    left = random_quaternion_matrix(rng, n, rank)
    return chi(left @ left.adjoint())


def _normal_quaternionic(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    U = random_symplectic_unitary(rng, n)
    d = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * _mask(n, rank)
    return U @ np.diag(np.concatenate([d, d.conj()])) @ U.conj().T


def _selfdual(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    G = random_complex(rng, 2 * n)
    if rank is None:
        return 0.5 * (G + dual(G))
    d = rng.standard_normal(n) * _mask(n, rank)
    return dual(G) @ np.diag(np.concatenate([d, d])) @ G


def _symmetric(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    G = random_complex(rng, 2 * n)
    if rank is None:
        return 0.5 * (G + G.T)
    d = rng.standard_normal(2 * n) * _mask(2 * n, 2 * rank)
    return G.T @ np.diag(d) @ G


def _symplectic_unitary(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    return random_symplectic_unitary(rng, n)


def _isometry_rank(n: int, rank: int | None) -> int:
    return max(1, n // 2) if rank is None else rank


def _quaternionic_partial_isometry(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    p = _mask(n, _isometry_rank(n, rank))
    projector = np.diag(np.concatenate([p, p])).astype(complex)
    return random_symplectic_unitary(rng, n) @ projector @ random_symplectic_unitary(rng, n)


def _selfdual_partial_isometry(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    phases = np.exp(2j * np.pi * rng.random(n)) * _mask(n, _isometry_rank(n, rank))
    V = random_unitary(rng, 2 * n)
    return dual(V) @ np.diag(np.concatenate([phases, phases])) @ V


def _symmetric_partial_isometry(rng: np.random.Generator, n: int, rank: int | None) -> CMatrix:
    k = 2 * _isometry_rank(n, rank)
    phases = np.exp(2j * np.pi * rng.random(2 * n)) * _mask(2 * n, k)
    V = random_unitary(rng, 2 * n)
    return V.T @ np.diag(phases) @ V


_GENERATORS = {
    StructureClass.QUATERNIONIC: _quaternionic,
    StructureClass.HERMITIAN_QUATERNIONIC: _hermitian_quaternionic,
    StructureClass.NORMAL_QUATERNIONIC: _normal_quaternionic,
    StructureClass.SELFDUAL: _selfdual,
    StructureClass.SYMMETRIC: _symmetric,
    StructureClass.SYMPLECTIC_UNITARY: _symplectic_unitary,
    StructureClass.QUATERNIONIC_PARTIAL_ISOMETRY: _quaternionic_partial_isometry,
    StructureClass.SELFDUAL_PARTIAL_ISOMETRY: _selfdual_partial_isometry,
    StructureClass.SYMMETRIC_PARTIAL_ISOMETRY: _symmetric_partial_isometry,
}


def _commuting_family(
    rng: np.random.Generator, n: int, base: StructureClass, family_size: int, rank: int | None
) -> list[CMatrix]:
    # Real polynomial coefficients keep the quaternionic and self-dual conditions.
    X = _GENERATORS[base](rng, n, rank)
    top = float(np.linalg.norm(X, 2))
    if top > 0:
        X = X / top
    eye = np.eye(2 * n, dtype=complex)
    family = []
    for _ in range(family_size):
        c0, c1, c2 = rng.standard_normal(3)
        family.append(c0 * eye + c1 * X + c2 * (X @ X))
    return family


def generate(spec: GenSpec) -> CMatrix | list[CMatrix]:
    """
    Draw a seeded member of spec.kind.

    Returns:
        A 2N×2N complex matrix, or a list of them for commuting families.
    """
    rng = make_rng(spec.seed)
    if spec.kind is StructureClass.COMMUTING_FAMILY:
        return _commuting_family(rng, spec.size, spec.base, spec.family_size, spec.rank)
    return _GENERATORS[spec.kind](rng, spec.size, spec.rank)


def generate_quaternion(size: int, seed: int = 0) -> QuatMatrix:
    """A seeded random N×N quaternion matrix."""
    return random_quaternion_matrix(make_rng(seed), size)


# Well-separated eigenvalues on or above the real axis for planted Jordan forms.
JORDAN_EIGENVALUES = (0.0, 1.0, -1.0, 2.0, 1j, 1 + 1j, -1 + 1j, 2j)


def plant_jordan(
    blocks: list[tuple[complex, int]], seed: int = 0, spread: float = 0.3
) -> CMatrix:
    """
    χ(S) χ(J) χ(S)^{-1} for the quaternion Jordan matrix J with the given blocks.

    S = I + spread·G/‖G‖_F for a random quaternion G, so cond(S) is at most
    (1 + spread)/(1 − spread). Each block (λ, r) with Im λ ≥ 0 appears in χ(J)
    together with its conjugate block (conj λ, r).
    """
    if not 0 <= spread < 1:
        raise ValueError(f"spread must lie in [0, 1), got {spread}")
    J = scipy.linalg.block_diag(*(jordan_block(lam, r) for lam, r in blocks)).astype(complex)
    n = J.shape[0]
    G = random_quaternion_matrix(make_rng(seed), n)
    S = chi(QuatMatrix(QuatMatrix.identity(n).coeffs + spread * G.coeffs / G.frobenius_norm()))
    zero = np.zeros_like(J)
    return S @ np.block([[J, zero], [zero, J.conj()]]) @ np.linalg.inv(S)


def random_jordan_blocks(
    seed: int,
    max_block: int = 4,
    max_blocks: int = 3,
    neighbour_gap: tuple[float, float] = (1.2e-3, 3e-3),
) -> list[tuple[complex, int]]:
    """
    Distinct eigenvalues from JORDAN_EIGENVALUES with random block sizes.

    Half the draws also place a simple eigenvalue a real distance in
    neighbour_gap beside a block of size at most 2, so close clusters are
    exercised. Larger blocks split into wider rings under rounding and get no
    neighbour.
    """
    rng = make_rng(seed)
    count = int(rng.integers(1, max_blocks + 1))
    picks = rng.choice(len(JORDAN_EIGENVALUES), size=count, replace=False)
    blocks = [
        (complex(JORDAN_EIGENVALUES[i]), int(rng.integers(1, max_block + 1))) for i in picks
    ]
    anchors = [lam for lam, size in blocks if size <= 2]
    if anchors and rng.random() < 0.5:
        blocks.append((anchors[0] + float(rng.uniform(*neighbour_gap)), 1))
    return blocks



def residual_report(result: HasChecks | list[Check], tol: float, fmt: str = "text") -> str:
    """
    Render every check of a result with its deviation and pass/fail status.

    Args:
        result: Any object with checks(tol), or a ready list of checks.
        tol: Tolerance the thresholds are derived from.
        fmt: "text" for an aligned table, "machine" for key=value lines.
    """
    checks = result if isinstance(result, list) else result.checks(tol)
    overall = all_passed(checks)
    if fmt == "machine":
        lines = []
        for i, check in enumerate(checks, start=1):
            lines += [
                f"check.{i}.name={check.name}",
                f"check.{i}.deviation={check.deviation:.3g}",
                f"check.{i}.threshold={check.threshold:.3g}",
                f"check.{i}.status={'pass' if check.passed else 'fail'}",
            ]
        lines.append(f"status={'pass' if overall else 'fail'}")
        return "\n".join(lines)
    if fmt != "text":
        raise ValueError(f"unknown report format: {fmt!r}")

    width = max([len(c.name) for c in checks] + [5])
    lines = [f"{'check':<{width}}  {'deviation':>10}  {'threshold':>10}  status"]
    lines.append("-" * len(lines[0]))
    for check in checks:
        status = "pass" if check.passed else "fail"
        lines.append(
            f"{check.name:<{width}}  {check.deviation:>10.3g}  {check.threshold:>10.3g}  {status}"
        )
    lines.append(f"overall: {'pass' if overall else 'fail'}")
    return "\n".join(lines)
