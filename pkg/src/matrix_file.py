"""
Line-oriented text format for complex and quaternion matrices.

    # comment lines start with '#'
    format-version: 1
    kind: complex | quaternion
    rows: <int>
    cols: <int>
    <entries, row-major>

A complex entry is `re im`, a quaternion entry is `a b c d`. The writer puts
one matrix row per line; the reader accepts any wrapping.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
import numpy.typing as npt

from src.embedding import chi, chi_inv
from src.errors import MatrixFileError
from src.quaternion import QuatMatrix

FORMAT_VERSION = 1
HEADER_FIELDS = ("format-version", "kind", "rows", "cols")
_HEADER = re.compile(r"^([A-Za-z][A-Za-z-]*)\s*:\s*(.*)$")


class MatrixKind(Enum):
    COMPLEX = "complex"
    QUATERNION = "quaternion"

    @property
    def width(self) -> int:
        """Numbers per entry."""
        return 2 if self is MatrixKind.COMPLEX else 4


def _positive_int(field: str, raw: str | None) -> int:
    if raw is None:
        raise MatrixFileError(field, "missing")
    try:
        value = int(raw)
    except ValueError:
        raise MatrixFileError(field, f"not an integer: {raw!r}") from None
    if value < 1:
        raise MatrixFileError(field, f"must be positive, got {value}")
    return value


@dataclass(frozen=True, eq=False)
class MatrixFile:
    """
    A parsed matrix file.

    Attributes:
        kind: Entry kind.
        data: Complex array (rows, cols) or real array (rows, cols, 4).
    """

    kind: MatrixKind
    data: npt.NDArray
    format_version: int = FORMAT_VERSION

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @classmethod
    def from_complex(cls, X: npt.ArrayLike) -> MatrixFile:
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        return cls(MatrixKind.COMPLEX, X)

    @classmethod
    def from_quaternion(cls, Q: QuatMatrix) -> MatrixFile:
        return cls(MatrixKind.QUATERNION, Q.coeffs.copy())

    def as_complex(self) -> npt.NDArray[np.complex128]:
        """The complex matrix, taking the χ-image of quaternion data."""
        if self.kind is MatrixKind.QUATERNION:
            return chi(QuatMatrix(self.data))
        return self.data

    def as_quaternion(self, tol: float = 1e-10) -> QuatMatrix:
        """The quaternion matrix; complex data must be quaternionic."""
        if self.kind is MatrixKind.QUATERNION:
            return QuatMatrix(self.data)
        return chi_inv(self.data, tol)

    @classmethod
    def parse(cls, text: str) -> MatrixFile:
        """
        Parse the text format.

        Raises:
            MatrixFileError: Naming the offending field on any violation.
        """
        headers: dict[str, str] = {}
        numbers: list[str] = []
        for raw_line in text.splitlines():
            line = raw_line.strip()
            if not line or line.startswith("#"):
                continue
            match = _HEADER.match(line)
            if match and not numbers:
                key, value = match.group(1).lower(), match.group(2).strip()
                if key not in HEADER_FIELDS:
                    raise MatrixFileError(key, "unknown header field")
                if key in headers:
                    raise MatrixFileError(key, "given more than once")
                headers[key] = value
                continue
            numbers.extend(line.split())

        version_raw = headers.get("format-version")
        if version_raw is None:
            raise MatrixFileError("format-version", "missing")
        if version_raw != str(FORMAT_VERSION):
            raise MatrixFileError("format-version", f"unsupported version {version_raw!r}")

        kind_raw = headers.get("kind")
        if kind_raw is None:
            raise MatrixFileError("kind", "missing")
        try:
            kind = MatrixKind(kind_raw.lower())
        except ValueError:
            raise MatrixFileError(
                "kind", f"expected 'complex' or 'quaternion', got {kind_raw!r}"
            ) from None

        rows = _positive_int("rows", headers.get("rows"))
        cols = _positive_int("cols", headers.get("cols"))

        try:
            values = np.array([float(token) for token in numbers], dtype=float)
        except ValueError as exc:
            raise MatrixFileError("entries", f"not a number ({exc})") from None
        if not np.all(np.isfinite(values)):
            raise MatrixFileError("entries", "non-finite value")

        expected = rows * cols
        if values.size % kind.width:
            raise MatrixFileError(
                "entry count",
                f"{values.size} numbers do not form whole {kind.value} entries "
                f"of {kind.width} numbers each",
            )
        found = values.size // kind.width
        if found != expected:
            raise MatrixFileError("entry count", f"expected {expected} entries, found {found}")

        if kind is MatrixKind.COMPLEX:
            pairs = values.reshape(rows, cols, 2)
            data = pairs[..., 0] + 1j * pairs[..., 1]
        else:
            data = values.reshape(rows, cols, 4)
        return cls(kind, data)

    def to_text(self) -> str:
        """Serialize with 17 significant digits, one matrix row per line."""
        lines = [
            f"format-version: {self.format_version}",
            f"kind: {self.kind.value}",
            f"rows: {self.rows}",
            f"cols: {self.cols}",
        ]
        for i in range(self.rows):
            if self.kind is MatrixKind.COMPLEX:
                parts = [f"{z.real:.17g} {z.imag:.17g}" for z in self.data[i]]
            else:
                parts = [" ".join(f"{x:.17g}" for x in entry) for entry in self.data[i]]
            lines.append("  ".join(parts))
        return "\n".join(lines) + "\n"

    @classmethod
    def read(cls, path: str | Path) -> MatrixFile:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise MatrixFileError("path", f"cannot read {path}: {exc.strerror}") from exc
        except UnicodeDecodeError as exc:
            raise MatrixFileError("path", f"{path} is not UTF-8 text: {exc.reason}") from exc
        return cls.parse(text)

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(), encoding="utf-8")
        return path
