"""
Command-line surface.

    python main.py <command> [inputs ...] [--tol T] [--seed S] [--out DIR]
                   [--format text|machine] [--verbose]

Exit status is 0 when every check passes, 1 when a check fails or the input
lacks the required structure, and 2 for malformed files or usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from src.commands import COMMANDS, CommandOptions, CommandResult, run_command
from src.config import Settings, load_settings
from src.errors import NumericalError, QuatFactorError, StructureError, UsageError
from src.matrix_file import MatrixFile
from src.testkit import StructureClass

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

_HELP = {
    "check": "classify a matrix and optionally require structure flags",
    "schur": "simultaneous quaternionic Schur form of a commuting family",
    "diag": "diagonalize a commuting family of normal quaternionic matrices",
    "qr": "quaternionic QR decomposition",
    "svd": "quaternionic singular value decomposition",
    "polar": "polar decomposition with a symplectic unitary factor",
    "polar-symmetric": "polar decomposition of a complex symmetric matrix",
    "polar-selfdual": "polar decomposition of a self-dual matrix",
    "schur-selfdual": "self-dual Schur form of a commuting self-dual family",
    "jordan": "Kramers-paired Jordan form of a quaternionic matrix",
    "spectrum": "right eigenvalues of a quaternion matrix",
    "norm": "operator norm of a quaternion matrix with its witness vector",
    "tensor-verify": "check the tensor-product dual identities on two matrices",
    "gen": "draw a seeded random matrix of a structure class",
}


def _positive_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {raw!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None, help="pass/fail tolerance")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized steps")
    common.add_argument("--out", type=Path, default=None, help="directory for factor files")
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--verbose", "-v", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="quatfactor",
        description="Structured factorizations of quaternion matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in COMMANDS:
        cmd = sub.add_parser(name, parents=[common], help=_HELP[name], description=_HELP[name])
        if name == "gen":
            classes = [k.value for k in StructureClass]
            cmd.add_argument("--class", dest="kind", choices=classes, default=classes[0])
            cmd.add_argument("--size", type=int, default=2, help="N; matrices are 2N×2N")
            cmd.add_argument("--family-size", type=int, default=3)
            cmd.add_argument(
                "--base",
                choices=[c for c in classes if c != StructureClass.COMMUTING_FAMILY.value],
                default=classes[0],
                help="class a commuting family is built from",
            )
            cmd.add_argument("--rank", type=int, default=None, help="Kramers pairs in the range")
            continue
        cmd.add_argument("inputs", nargs="+", type=Path, help="matrix files")
        if name == "check":
            cmd.add_argument(
                "--expect",
                default="",
                help="comma-separated structure flags that must hold",
            )
    return parser


def _options(args: argparse.Namespace) -> CommandOptions:
    if args.command == "gen":
        return CommandOptions(
            kind=args.kind,
            size=args.size,
            family_size=args.family_size,
            base=args.base,
            rank=args.rank,
        )
    if args.command == "check":
        expect = tuple(flag.strip() for flag in args.expect.split(",") if flag.strip())
        return CommandOptions(expect=expect)
    return CommandOptions()


def _emit(result: CommandResult, args: argparse.Namespace, settings: Settings) -> None:
    report = result.report(settings.tol, args.format)
    if result.command == "gen" and args.out is None:
        # The matrix goes to stdout so it can be redirected into a file.
        if len(result.factors) != 1:
            raise UsageError("gen: a commuting family needs --out")
        sys.stdout.write(next(iter(result.factors.values())).to_text())
        print(report, file=sys.stderr)
        return
    print(report)
    if args.out is None:
        return
    for name, factor in result.factors.items():
        path = factor.write(args.out / f"{name}.txt")
        if args.format == "machine":
            print(f"factor.{name}={path}")
        else:
            print(f"wrote {name}: {path}")


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run one command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        settings = load_settings().with_overrides(tol=args.tol, seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level)
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )

    try:
        matrices = [MatrixFile.read(path) for path in getattr(args, "inputs", [])]
        result = run_command(args.command, matrices, settings, _options(args))
        _emit(result, args, settings)
    except (StructureError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except QuatFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    return EXIT_OK if result.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
