"""
Command layer shared by the command line and the tool server.

Every command takes parsed matrix files and returns a CommandResult: the
checks that decide the exit status, informational lines, and factor
matrices to write.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from src.checks import RECONSTRUCTION_FACTOR, Check, all_passed
from src.config import Settings
from src.embedding import FLAG_NAMES, CMatrix, classify
from src.errors import UsageError
from src.factor_quaternionic import (
    diagonalize_commuting_normal,
    operator_norm_witness,
    polar_quaternionic,
    qr_quaternionic,
    right_eigenpairs,
    schur_commuting,
    svd_quaternionic,
)
from src.factor_selfdual import (
    polar_selfdual,
    polar_symmetric,
    schur_selfdual_commuting,
    tensor_report,
)
from src.jordan import jordan_quaternionic
from src.matrix_file import MatrixFile
from src.testkit import GenSpec, StructureClass, expected_flags, generate, residual_report

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommandOptions:
    """Per-command options beyond tolerance and seed."""

    expect: tuple[str, ...] = ()
    kind: str = StructureClass.QUATERNIONIC.value
    size: int = 2
    family_size: int = 3
    base: str = StructureClass.QUATERNIONIC.value
    rank: int | None = None


@dataclass
class CommandResult:
    """Outcome of one command."""

    command: str
    checks: list[Check]
    info: list[tuple[str, str]] = field(default_factory=list)
    factors: dict[str, MatrixFile] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all_passed(self.checks)

    def report(self, tol: float, fmt: str = "text") -> str:
        """Informational lines followed by the residual report."""
        if fmt == "machine":
            head = [f"command={self.command}"] + [f"{key}={value}" for key, value in self.info]
        else:
            head = [f"command: {self.command}"] + [f"{key}: {value}" for key, value in self.info]
        return "\n".join(head + [residual_report(self.checks, tol, fmt)])

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            "info": dict(self.info),
            "factors": {name: factor.to_text() for name, factor in self.factors.items()},
        }


def format_complex(z: complex, digits: int = 6) -> str:
    """Short text for a complex number with negligible parts dropped."""
    z = complex(z)
    cut = 1e-12 * max(1.0, abs(z))
    re = 0.0 if abs(z.real) <= cut else z.real
    im = 0.0 if abs(z.imag) <= cut else z.imag
    if im == 0.0:
        return f"{re:.{digits}g}"
    if re == 0.0:
        return f"{im:.{digits}g}i"
    sign = "-" if im < 0 else "+"
    return f"{re:.{digits}g} {sign} {abs(im):.{digits}g}i"


def _format_list(values: np.ndarray | list) -> str:
    return ", ".join(format_complex(z) for z in values)


def _single(matrices: list[MatrixFile]) -> CMatrix:
    return matrices[0].as_complex()


def _run_check(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    unknown = [name for name in options.expect if name not in FLAG_NAMES]
    if unknown:
        raise UsageError(
            f"unknown structure flag(s) {', '.join(unknown)}; choose from {', '.join(FLAG_NAMES)}"
        )
    report = classify(_single(matrices), settings.tol)
    info = [("flags", ", ".join(report.holding()) or "none")]
    info += [(f"deviation.{name}", f"{dev:.3g}") for name, dev in report.deviations.items()]
    threshold = settings.tol * report.scale
    checks = [Check(name, report.deviations[name], threshold) for name in options.expect]
    return CommandResult("check", checks, info)


def _run_schur(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = schur_commuting(
        [m.as_complex() for m in matrices], seed=settings.seed, tol=settings.tol
    )
    factors = {"U": MatrixFile.from_complex(result.U)}
    info = []
    for j in range(len(matrices)):
        factors[f"T{j}"] = MatrixFile.from_complex(result.T[j])
        factors[f"S{j}"] = MatrixFile.from_complex(result.S[j])
        info.append((f"diagonal.X{j}", _format_list(result.diagonal(j))))
    return CommandResult("schur", result.checks(settings.tol), info, factors)


def _run_diag(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = diagonalize_commuting_normal(
        [m.as_complex() for m in matrices], seed=settings.seed, tol=settings.tol
    )
    factors = {"U": MatrixFile.from_complex(result.U)}
    info = []
    for j in range(len(matrices)):
        factors[f"D{j}"] = MatrixFile.from_complex(result.diagonal_form(j))
        info.append((f"eigenvalues.X{j}", _format_list(result.D[j])))
    return CommandResult("diag", result.checks(settings.tol), info, factors)


def _run_qr(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = qr_quaternionic(_single(matrices), settings.tol)
    factors = {"Q": MatrixFile.from_complex(result.Q), "R": MatrixFile.from_complex(result.R)}
    return CommandResult("qr", result.checks(settings.tol), [], factors)


def _run_svd(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = svd_quaternionic(_single(matrices), seed=settings.seed, tol=settings.tol)
    factors = {
        "U": MatrixFile.from_complex(result.U),
        "D": MatrixFile.from_complex(result.D),
        "V": MatrixFile.from_complex(result.V),
    }
    info = [("singular values", ", ".join(f"{s:.6g}" for s in result.singular_values))]
    return CommandResult("svd", result.checks(settings.tol), info, factors)


def _polar_command(name: str, polar: Callable) -> Callable[..., CommandResult]:
    def _run(
        matrices: list[MatrixFile], settings: Settings, options: CommandOptions
    ) -> CommandResult:
        result = polar(_single(matrices), settings.tol)
        factors = {
            "U": MatrixFile.from_complex(result.U),
            "P": MatrixFile.from_complex(result.P),
            "W": MatrixFile.from_complex(result.W),
        }
        return CommandResult(name, result.checks(settings.tol), [], factors)

    return _run


def _run_schur_selfdual(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = schur_selfdual_commuting(
        [m.as_complex() for m in matrices], seed=settings.seed, tol=settings.tol
    )
    factors = {"U": MatrixFile.from_complex(result.U)}
    info = []
    for j in range(len(matrices)):
        factors[f"T{j}"] = MatrixFile.from_complex(result.T[j])
        factors[f"C{j}"] = MatrixFile.from_complex(result.C[j])
        info.append((f"diagonal.X{j}", _format_list(np.diag(result.T[j]))))
    return CommandResult("schur-selfdual", result.checks(settings.tol), info, factors)


def _run_jordan(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    result = jordan_quaternionic(_single(matrices), structure_tol=settings.tol)
    blocks = "; ".join(f"{format_complex(lam)} x{size}" for lam, size in result.blocks)
    info = [("blocks", blocks), ("condition", f"{result.condition:.3g}")]
    factors = {"S": MatrixFile.from_complex(result.S), "J": MatrixFile.from_complex(result.J)}
    return CommandResult("jordan", result.checks(settings.tol), info, factors)


def _run_spectrum(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    Q = matrices[0].as_quaternion(settings.tol)
    pairs = right_eigenpairs(Q)
    values = [pair.value for pair in pairs] + [pair.value.conjugate() for pair in pairs]
    info = [(f"eigenvalue.{k}", format_complex(z)) for k, z in enumerate(values, start=1)]
    scale = max(1.0, Q.frobenius_norm())
    checks = [
        Check.relative(
            f"right eigenpair {k}", pair.residual, scale, settings.tol, RECONSTRUCTION_FACTOR
        )
        for k, pair in enumerate(pairs, start=1)
    ]
    return CommandResult("spectrum", checks, info)


def _run_norm(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    witness = operator_norm_witness(matrices[0].as_quaternion(settings.tol))
    info = [("norm", f"{witness.norm:.17g}")]
    factors = {"v": MatrixFile.from_quaternion(witness.vector)}
    return CommandResult("norm", witness.checks(settings.tol), info, factors)


def _run_tensor_verify(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    report = tensor_report(matrices[0].as_complex(), matrices[1].as_complex())
    return CommandResult("tensor-verify", report.checks(settings.tol))


def _structure_class(value: str, flag: str) -> StructureClass:
    try:
        return StructureClass(value)
    except ValueError:
        choices = ", ".join(k.value for k in StructureClass)
        raise UsageError(f"{flag}: unknown class {value!r}; choose from {choices}") from None


def _run_gen(
    matrices: list[MatrixFile], settings: Settings, options: CommandOptions
) -> CommandResult:
    kind = _structure_class(options.kind, "--class")
    base = _structure_class(options.base, "--base")
    try:
        spec = GenSpec(
            size=options.size,
            kind=kind,
            seed=settings.seed,
            family_size=options.family_size,
            base=base,
            rank=options.rank,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    drawn = generate(spec)
    if kind is StructureClass.COMMUTING_FAMILY:
        members, flags = drawn, expected_flags(base)
        names = [f"X{j}" for j in range(len(members))]
    else:
        members, flags = [drawn], expected_flags(kind)
        names = ["X"]

    checks = []
    for name, X in zip(names, members):
        report = classify(X, settings.tol)
        threshold = settings.tol * report.scale
        checks += [
            Check(f"{name} {flag}", report.deviations[flag], threshold) for flag in sorted(flags)
        ]
    info = [("class", kind.value), ("size", str(options.size)), ("seed", str(settings.seed))]
    factors = {name: MatrixFile.from_complex(X) for name, X in zip(names, members)}
    return CommandResult("gen", checks, info, factors)


Runner = Callable[[list[MatrixFile], Settings, CommandOptions], CommandResult]

# name -> (runner, minimum inputs, maximum inputs or None)
COMMANDS: dict[str, tuple[Runner, int, int | None]] = {
    "check": (_run_check, 1, 1),
    "schur": (_run_schur, 1, None),
    "diag": (_run_diag, 1, None),
    "qr": (_run_qr, 1, 1),
    "svd": (_run_svd, 1, 1),
    "polar": (_polar_command("polar", polar_quaternionic), 1, 1),
    "polar-symmetric": (_polar_command("polar-symmetric", polar_symmetric), 1, 1),
    "polar-selfdual": (_polar_command("polar-selfdual", polar_selfdual), 1, 1),
    "schur-selfdual": (_run_schur_selfdual, 1, None),
    "jordan": (_run_jordan, 1, 1),
    "spectrum": (_run_spectrum, 1, 1),
    "norm": (_run_norm, 1, 1),
    "tensor-verify": (_run_tensor_verify, 2, 2),
    "gen": (_run_gen, 0, 0),
}


def run_command(
    name: str,
    matrices: list[MatrixFile],
    settings: Settings,
    options: CommandOptions | None = None,
) -> CommandResult:
    """
    Run one command on parsed inputs.

    Raises:
        UsageError: For an unknown command or the wrong number of inputs.
        StructureError, NumericalError, ShapeError: From the library call.
    """
    if name not in COMMANDS:
        raise UsageError(f"unknown command {name!r}; choose from {', '.join(COMMANDS)}")
    runner, low, high = COMMANDS[name]
    count = len(matrices)
    if count < low or (high is not None and count > high):
        expected = str(low) if low == high else f"at least {low}"
        raise UsageError(f"{name} takes {expected} input matrix file(s), got {count}")
    logger.info("running %s on %d input(s), tol=%.3g seed=%d", name, count, settings.tol, settings.seed)
    result = runner(matrices, settings, options or CommandOptions())
    logger.info("%s finished: %s", name, "pass" if result.passed else "fail")
    return result
