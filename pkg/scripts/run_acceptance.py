"""
Quaternion Factor - Acceptance Sweeps

Runs every factorization on seeded random instances and prints a coloured
pass/fail board. The unit suite runs the same checks on fewer instances.
"""

import argparse
import sys
import time
from collections.abc import Callable

import numpy as np

from src.checks import Check, all_passed, norm
from src.embedding import chi, classify, time_reversal_defect
from src.factor_quaternionic import (
    diagonalize_commuting_normal,
    operator_norm_witness,
    polar_quaternionic,
    qr_quaternionic,
    right_eigenpairs,
    schur_commuting,
    svd_quaternionic,
    symplectic_det_check,
)
from src.factor_selfdual import (
    polar_selfdual,
    polar_symmetric,
    schur_selfdual_commuting,
    tensor_report,
    verify_triple_dual,
)
from src.jordan import jordan_quaternionic
from src.kernels import make_rng
from src.quaternion import QuatMatrix
from src.testkit import (
    GenSpec,
    StructureClass,
    generate,
    generate_quaternion,
    plant_jordan,
    random_complex,
    random_jordan_blocks,
    random_quaternion_matrix,
)


# ANSI color codes
class Colors:
    RESET = "\033[0m"
    BOLD = "\033[1m"
    DIM = "\033[2m"

    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    CYAN = "\033[96m"


Sweep = Callable[[int, int, float], list[Check]]


def sweep_embedding(seed: int, n: int, tol: float) -> list[Check]:
    P, Q = generate_quaternion(n, seed), generate_quaternion(n, seed + 10_000)
    product = np.linalg.norm(chi(P @ Q) - chi(P) @ chi(Q))
    bound = np.linalg.norm(chi(P)) * np.linalg.norm(chi(Q))
    adjoint = np.linalg.norm(chi(P.adjoint()) - chi(P).conj().T)
    return [Check("χ(PQ) = χ(P)χ(Q)", product / bound, 1e-12), Check("χ(P*) = χ(P)*", adjoint, 1e-12)]


def sweep_schur(seed: int, n: int, tol: float) -> list[Check]:
    family = generate(GenSpec(n, StructureClass.COMMUTING_FAMILY, seed=seed))
    result = schur_commuting(family, seed=seed)
    return result.checks(tol)


def sweep_normal(seed: int, n: int, tol: float) -> list[Check]:
    family = generate(
        GenSpec(n, StructureClass.COMMUTING_FAMILY, seed=seed, base=StructureClass.NORMAL_QUATERNIONIC)
    )
    return diagonalize_commuting_normal(family, seed=seed).checks(tol)


def sweep_determinant(seed: int, n: int, tol: float) -> list[Check]:
    U = generate(GenSpec(n, StructureClass.SYMPLECTIC_UNITARY, seed=seed))
    det = symplectic_det_check(U)
    return [Check("det U = 1", abs(det - 1.0), 1e-8)]


def sweep_right_eigenpairs(seed: int, n: int, tol: float) -> list[Check]:
    Q = generate_quaternion(n, seed)
    scale = max(1.0, Q.frobenius_norm())
    return [
        Check.relative(f"eigenpair {k}", pair.residual, scale, tol, 10.0)
        for k, pair in enumerate(right_eigenpairs(Q), start=1)
    ]


def sweep_norm(seed: int, n: int, tol: float) -> list[Check]:
    Q = generate_quaternion(n, seed)
    witness = operator_norm_witness(Q)
    rng = make_rng(seed + 20_000)
    worst = 0.0
    for _ in range(50):
        v = random_quaternion_matrix(rng, n, 1)
        worst = max(worst, (Q @ v).frobenius_norm() / v.frobenius_norm())
    return witness.checks(tol) + [
        Check("‖Qv‖ ≤ ‖Q‖‖v‖", max(0.0, worst - witness.norm) / witness.norm, 1e-9)
    ]


def sweep_factorizations(seed: int, n: int, tol: float) -> list[Check]:
    X = generate(GenSpec(n, StructureClass.QUATERNIONIC, seed=seed))
    return (
        polar_quaternionic(X).checks(tol)
        + svd_quaternionic(X, seed=seed).checks(tol)
        + qr_quaternionic(X).checks(tol)
    )


def sweep_selfdual(seed: int, n: int, tol: float) -> list[Check]:
    family = generate(
        GenSpec(n, StructureClass.COMMUTING_FAMILY, seed=seed, base=StructureClass.SELFDUAL)
    )
    symmetric = generate(GenSpec(n, StructureClass.SYMMETRIC, seed=seed))
    selfdual = generate(GenSpec(n, StructureClass.SELFDUAL, seed=seed))
    return (
        schur_selfdual_commuting(family, seed=seed).checks(tol)
        + polar_symmetric(symmetric).checks(tol)
        + polar_selfdual(selfdual).checks(tol)
    )


def sweep_tensor(seed: int, n: int, tol: float) -> list[Check]:
    rng = make_rng(seed)
    m = int(rng.integers(1, 4))
    X = generate(GenSpec(min(n, 3), StructureClass.QUATERNIONIC, seed=seed))
    Y = generate(GenSpec(m, StructureClass.SELFDUAL, seed=seed + 1))
    A, B, C = (random_complex(rng, 2) for _ in range(3))
    triple = verify_triple_dual(A, B, C) / (norm(A) * norm(B) * norm(C))
    return tensor_report(X, Y).checks(tol) + [Check("three duals as one dual", triple, 1e-11)]



def sweep_jordan(seed: int, n: int, tol: float) -> list[Check]:
    blocks = random_jordan_blocks(seed)
    X = plant_jordan(blocks, seed=seed)
    result = jordan_quaternionic(X)
    planted = sorted(size for _, size in blocks for _ in range(2))
    mismatch = float(result.block_sizes() != planted)
    return result.checks(tol) + [Check("block sizes match planted", mismatch, 0.0)]


def sweep_classify(seed: int, n: int, tol: float) -> list[Check]:
    rng = make_rng(seed + 30_000)
    inside = seed % 2 == 0
    if inside:
        X = generate(GenSpec(n, StructureClass.QUATERNIONIC, seed=seed))
    else:
        X = random_complex(rng, 2 * n)
    threshold = tol * max(1.0, norm(X))
    blocks = chi(QuatMatrix.from_complex_parts(X[:n, :n], X[:n, n:]))
    via_blocks = norm(X - blocks) <= threshold
    via_reversal = time_reversal_defect(X, random_complex(rng, 2 * n, 20)) <= threshold
    flag = classify(X, tol).quaternionic
    return [
        Check("quaternionic flag matches class", float(flag != inside), 0.0),
        Check("flag agrees with χ-membership", float(flag != via_blocks), 0.0),
        Check("flag agrees with 𝒯-commutation", float(flag != via_reversal), 0.0),
    ]



SWEEPS: dict[str, Sweep] = {
    "embedding homomorphism": sweep_embedding,
    "classify": sweep_classify,
    "quaternionic Schur": sweep_schur,
    "normal diagonalization": sweep_normal,
    "determinant one": sweep_determinant,
    "right eigenpairs": sweep_right_eigenpairs,
    "operator norm": sweep_norm,
    "polar / SVD / QR": sweep_factorizations,
    "self-dual suite": sweep_selfdual,
    "tensor identities": sweep_tensor,
    "planted Jordan": sweep_jordan,
}


def print_header(count: int, max_size: int, tol: float) -> None:
    print(f"{Colors.BOLD}{Colors.CYAN}╔══════════════════════════════════════════════════════════╗{Colors.RESET}")
    print(f"{Colors.BOLD}{Colors.CYAN}║{Colors.RESET}  {Colors.BOLD}QUATERNION FACTOR ACCEPTANCE{Colors.RESET}                            {Colors.BOLD}{Colors.CYAN}║{Colors.RESET}")
    print(f"{Colors.BOLD}{Colors.CYAN}╚══════════════════════════════════════════════════════════╝{Colors.RESET}")
    print(f"  {Colors.DIM}{count} instances per sweep, N ≤ {max_size}, tol {tol:g}{Colors.RESET}")
    print()


def run_sweep(name: str, sweep: Sweep, count: int, max_size: int, tol: float) -> bool:
    """Run one sweep and print its board line; return whether every instance passed."""
    start = time.perf_counter()
    failures = []
    for seed in range(count):
        n = 1 + seed % max_size
        try:
            checks = sweep(seed, n, tol)
        except Exception as exc:  # noqa: BLE001
            failures.append(f"seed {seed}: {type(exc).__name__}: {exc}")
            continue
        if not all_passed(checks):
            worst = [c.name for c in checks if not c.passed]
            failures.append(f"seed {seed}: {', '.join(worst)}")
    elapsed = time.perf_counter() - start
    passed = count - len(failures)
    colour = Colors.GREEN if not failures else Colors.RED
    mark = "✓" if not failures else "✗"
    print(f"  {colour}{mark} {name:<26}{Colors.RESET} {passed:>4}/{count}  {Colors.DIM}{elapsed:6.2f}s{Colors.RESET}")
    for line in failures[:3]:
        print(f"      {Colors.YELLOW}{line}{Colors.RESET}")
    return not failures


def main() -> None:
    """Run every sweep and exit non-zero if any instance failed."""
    parser = argparse.ArgumentParser(description="Seeded acceptance sweeps.")
    parser.add_argument("--count", type=int, default=100, help="instances per sweep")
    parser.add_argument("--max-size", type=int, default=8, help="largest N")
    parser.add_argument("--tol", type=float, default=1e-10)
    parser.add_argument("--only", default=None, help="run the sweeps whose name contains this text")
    args = parser.parse_args()

    print_header(args.count, args.max_size, args.tol)
    ok = True
    for name, sweep in SWEEPS.items():
        if args.only and args.only.lower() not in name.lower():
            continue
        ok &= run_sweep(name, sweep, args.count, args.max_size, args.tol)
    print()
    if ok:
        print(f"  {Colors.GREEN}🎉 all sweeps passed{Colors.RESET}")
    else:
        print(f"  {Colors.RED}❌ some sweeps failed{Colors.RESET}")
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
