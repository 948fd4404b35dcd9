from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.errors import ShapeError


@dataclass(frozen=True)
class Quaternion:
    """
    A real quaternion a + bî + cĵ + dk̂.

    The complex pair view writes q = alpha + beta ĵ with alpha = a + bi and
    beta = c + di, which is the form the χ embedding consumes.
    """

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    @classmethod
    def from_complex_pair(cls, alpha: complex, beta: complex = 0j) -> Quaternion:
        """Build alpha + beta ĵ from two complex numbers."""
        alpha, beta = complex(alpha), complex(beta)
        return cls(alpha.real, alpha.imag, beta.real, beta.imag)

    def to_complex_pair(self) -> tuple[complex, complex]:
        """Return (alpha, beta) with self = alpha + beta ĵ."""
        return complex(self.a, self.b), complex(self.c, self.d)

    def to_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def conj(self) -> Quaternion:
        return quat_conj(self)

    def norm(self) -> float:
        return math.sqrt(self.a**2 + self.b**2 + self.c**2 + self.d**2)

    def inverse(self) -> Quaternion:
        """
        Return the two-sided inverse conj(q) / |q|².

        Raises:
            ZeroDivisionError: If q is zero.
        """
        n2 = self.a**2 + self.b**2 + self.c**2 + self.d**2
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        q = self.conj()
        return Quaternion(q.a / n2, q.b / n2, q.c / n2, q.d / n2)

    def __add__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    def __sub__(self, other: Quaternion) -> Quaternion:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(
            self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d
        )

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other: Quaternion | float) -> Quaternion:
        if isinstance(other, Quaternion):
            return quat_mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.a * other, self.b * other, self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other: float) -> Quaternion:
        if isinstance(other, (int, float)):
            return Quaternion(other * self.a, other * self.b, other * self.c, other * self.d)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Quaternion({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


ONE = Quaternion(1.0)
I_UNIT = Quaternion(0.0, 1.0)
J_UNIT = Quaternion(0.0, 0.0, 1.0)
K_UNIT = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p·q."""
    return Quaternion(
        p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
        p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
        p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
        p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
    )


def quat_conj(q: Quaternion) -> Quaternion:
    """The involution a + bî + cĵ + dk̂ ↦ a − bî − cĵ − dk̂."""
    return Quaternion(q.a, -q.b, -q.c, -q.d)


@dataclass(frozen=True, eq=False)
class QuatMatrix:
    """
    A rows×cols matrix of quaternions.

    Coefficients are stored as a real array of shape (rows, cols, 4) holding
    (a, b, c, d) per entry. Quaternion vectors are QuatMatrix columns, with
    scalars acting on the right.
    """

    coeffs: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 3 or coeffs.shape[2] != 4:
            raise ShapeError(
                f"QuatMatrix coefficients must have shape (rows, cols, 4), got {coeffs.shape}"
            )
        if coeffs.shape[0] < 1 or coeffs.shape[1] < 1:
            raise ShapeError(f"QuatMatrix needs positive dimensions, got {coeffs.shape[:2]}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QuatMatrix:
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n: int) -> QuatMatrix:
        return cls.scalar(ONE, n)

    @classmethod
    def scalar(cls, q: Quaternion, n: int) -> QuatMatrix:
        """Return q·I_n."""
        coeffs = np.zeros((n, n, 4))
        idx = np.arange(n)
        coeffs[idx, idx] = q.to_tuple()
        return cls(coeffs)

    @classmethod
    def from_entries(cls, entries: list[list[Quaternion]]) -> QuatMatrix:
        return cls(np.array([[q.to_tuple() for q in row] for row in entries], dtype=float))

    @classmethod
    def from_complex_parts(
        cls, alpha: npt.ArrayLike, beta: npt.ArrayLike | None = None
    ) -> QuatMatrix:
        """
        Build A + Bĵ from complex matrices (or column vectors) A and B.

        Args:
            alpha: Complex matrix A; a 1-D array is read as a column.
            beta: Complex matrix B of the same shape (zero if omitted).

        Returns:
            The quaternion matrix A + Bĵ.
        """
        alpha = np.asarray(alpha, dtype=complex)
        if alpha.ndim == 1:
            alpha = alpha[:, None]
        beta = np.zeros_like(alpha) if beta is None else np.asarray(beta, dtype=complex)
        if beta.ndim == 1:
            beta = beta[:, None]
        if alpha.shape != beta.shape:
            raise ShapeError(f"complex parts differ in shape: {alpha.shape} vs {beta.shape}")
        return cls(np.stack([alpha.real, alpha.imag, beta.real, beta.imag], axis=-1))

    def complex_parts(self) -> tuple[npt.NDArray[np.complex128], npt.NDArray[np.complex128]]:
        """Return (A, B) with self = A + Bĵ."""
        c = self.coeffs
        return c[..., 0] + 1j * c[..., 1], c[..., 2] + 1j * c[..., 3]

    def __getitem__(self, index: tuple[int, int]) -> Quaternion:
        a, b, c, d = self.coeffs[index]
        return Quaternion(float(a), float(b), float(c), float(d))

    def __add__(self, other: QuatMatrix) -> QuatMatrix:
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return QuatMatrix(self.coeffs + other.coeffs)

    def __sub__(self, other: QuatMatrix) -> QuatMatrix:
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return QuatMatrix(self.coeffs - other.coeffs)

    def __neg__(self) -> QuatMatrix:
        return QuatMatrix(-self.coeffs)

    def __matmul__(self, other: QuatMatrix) -> QuatMatrix:
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        return qmat_mul(self, other)

    def adjoint(self) -> QuatMatrix:
        return qmat_adjoint(self)

    def right_scale(self, lam: complex | Quaternion) -> QuatMatrix:
        """Multiply every entry on the right by a scalar (v ↦ v λ)."""
        if not isinstance(lam, Quaternion):
            lam = Quaternion.from_complex_pair(lam)
        return qmat_mul(self, QuatMatrix.scalar(lam, self.cols))

    def frobenius_norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs**2)))

    def allclose(self, other: QuatMatrix, atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"QuatMatrix(rows={self.rows}, cols={self.cols})"


def qmat_mul(x: QuatMatrix, y: QuatMatrix) -> QuatMatrix:
    """
    Quaternion matrix product, entry (i,k) = Σ_j X(i,j)·Y(j,k).

    Raises:
        ShapeError: If the inner dimensions disagree.
    """
    if x.cols != y.rows:
        raise ShapeError(f"inner dimensions disagree: {x.shape} @ {y.shape}")
    xa, xb, xc, xd = (x.coeffs[..., k] for k in range(4))
    ya, yb, yc, yd = (y.coeffs[..., k] for k in range(4))
    # Hamilton product expanded over real matrix products, factor order kept.
    out = np.stack(
        [
            xa @ ya - xb @ yb - xc @ yc - xd @ yd,
            xa @ yb + xb @ ya + xc @ yd - xd @ yc,
            xa @ yc - xb @ yd + xc @ ya + xd @ yb,
            xa @ yd + xb @ yc - xc @ yb + xd @ ya,
        ],
        axis=-1,
    )
    return QuatMatrix(out)


def qmat_adjoint(x: QuatMatrix) -> QuatMatrix:
    """Conjugate transpose: entry (i,j) = conj(X(j,i))."""
    coeffs = np.transpose(x.coeffs, (1, 0, 2)).copy()
    coeffs[..., 1:] *= -1.0
    return QuatMatrix(coeffs)


def qvec_norm(v: QuatMatrix) -> float:
    """Norm (Σ_j conj(v_j) v_j)^{1/2} of a quaternion vector (or any QuatMatrix)."""
    return v.frobenius_norm()
