"""MCP tool server exposing the factorization commands over stdio."""

from __future__ import annotations

from mcp.server.fastmcp import FastMCP

from src.commands import CommandOptions, run_command
from src.config import Settings, load_settings
from src.errors import QuatFactorError
from src.factor_quaternionic import right_eigenpairs
from src.matrix_file import MatrixFile

mcp = FastMCP("quaternion-factor")

# Settings are read from the environment once and shared between tool calls
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get the server settings, loading them on first use."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> Settings:
    """Reload settings from the environment."""
    global _settings
    _settings = load_settings()
    return _settings


def _failure(exc: QuatFactorError) -> dict:
    return {"success": False, "error": str(exc), "error_type": type(exc).__name__}


@mcp.tool()
def check_structure(matrix_text: str, tol: float | None = None) -> dict:
    """
    Classify a matrix by its structure flags.

    Args:
        matrix_text: Matrix in the text file format (format-version 1)
        tol: Relative tolerance (default: server setting)

    Returns:
        Flags that hold, every measured deviation, and the tolerance used
    """
    settings = get_settings().with_overrides(tol=tol)
    try:
        result = run_command("check", [MatrixFile.parse(matrix_text)], settings)
    except QuatFactorError as exc:
        return _failure(exc)
    info = dict(result.info)
    return {
        "success": True,
        "flags": [] if info["flags"] == "none" else info["flags"].split(", "),
        "deviations": {
            key.removeprefix("deviation."): float(value)
            for key, value in info.items()
            if key.startswith("deviation.")
        },
        "tolerance": settings.tol,
    }


@mcp.tool()
def factorize(
    command: str,
    matrix_texts: list[str],
    tol: float | None = None,
    seed: int | None = None,
) -> dict:
    """
    Run a factorization command on one or more matrices.

    Args:
        command: One of schur, diag, qr, svd, polar, polar-symmetric,
            polar-selfdual, schur-selfdual, jordan, spectrum, norm, tensor-verify
        matrix_texts: Input matrices in the text file format
        tol: Relative tolerance for the checks (default: server setting)
        seed: Seed for randomized deflation (default: server setting)

    Returns:
        Checks with deviations, informational values, and factors in the text format
    """
    if command in ("check", "gen"):
        return {
            "success": False,
            "error": f"use {'check_structure' if command == 'check' else 'generate_matrix'}",
            "error_type": "UsageError",
        }
    settings = get_settings().with_overrides(tol=tol, seed=seed)
    try:
        matrices = [MatrixFile.parse(text) for text in matrix_texts]
        result = run_command(command, matrices, settings)
    except QuatFactorError as exc:
        return _failure(exc)
    return {"success": True, **result.to_dict()}


@mcp.tool()
def right_spectrum(matrix_text: str) -> dict:
    """
    Right eigenvalues of a quaternion matrix with their eigenvectors.

    Args:
        matrix_text: Quaternion matrix, or its complex image, in the text file format

    Returns:
        One representative per conjugate pair with its eigenvector and residual,
        plus the full list of complex eigenvalues
    """
    settings = get_settings()
    try:
        Q = MatrixFile.parse(matrix_text).as_quaternion(settings.tol)
        pairs = right_eigenpairs(Q)
    except QuatFactorError as exc:
        return _failure(exc)
    values = [p.value for p in pairs] + [p.value.conjugate() for p in pairs]
    return {
        "success": True,
        "eigenvalues": [[z.real, z.imag] for z in values],
        "pairs": [
            {
                "value": [p.value.real, p.value.imag],
                "vector": MatrixFile.from_quaternion(p.vector).to_text(),
                "residual": p.residual,
            }
            for p in pairs
        ],
    }


@mcp.tool()
def generate_matrix(
    kind: str = "quaternionic",
    size: int = 2,
    seed: int | None = None,
    family_size: int = 3,
    rank: int | None = None,
) -> dict:
    """
    Draw a seeded random matrix of a structure class.

    Args:
        kind: Structure class, e.g. 'quaternionic', 'selfdual', 'commuting-family'
        size: N; generated matrices are 2N×2N (1-25)
        seed: Generator seed (default: server setting)
        family_size: Members of a commuting family
        rank: Kramers pairs in the range, for rank-deficient members

    Returns:
        The generated matrices in the text file format and their structure checks
    """
    settings = get_settings().with_overrides(seed=seed)
    size = max(1, min(25, size))
    options = CommandOptions(kind=kind, size=size, family_size=family_size, rank=rank)
    try:
        result = run_command("gen", [], settings, options)
    except QuatFactorError as exc:
        return _failure(exc)
    return {"success": True, **result.to_dict()}


def main() -> None:
    """Entry point for the MCP server."""
    mcp.run(transport="stdio")


if __name__ == "__main__":
    main()
