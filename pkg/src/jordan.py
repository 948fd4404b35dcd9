"""
Kramers-paired Jordan form of quaternionic matrices.

Eigenvalues of χ(X) are clustered first, since the Jordan structure is only
a well-posed numerical decision for well-separated clusters. Each cluster's
generalized eigenspace is isolated with an ordered Schur form, and the chain
structure is read off the nilpotent compressed operator.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
import scipy.cluster.hierarchy
import scipy.linalg

from src.checks import STRUCTURE_FACTOR, Check, norm
from src.config import CLUSTER_FACTOR, JORDAN_TOL, REAL_AXIS_FACTOR, STRUCTURE_TOL
from src.embedding import CMatrix, apply_T, as_square, classify, ensure_quaternionic
from src.errors import IllConditioned, NotAnEigenvalue, OddKernel
from src.kernels import nullspace, range_basis
from src.symplectic import KramersBasis, kramers_basis

logger = logging.getLogger(__name__)

# Jordan residual bound is this factor times condition(S) times tol.
JORDAN_RESIDUAL_FACTOR = 1e3
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Cluster:
    center: complex
    members: npt.NDArray[np.complex128]

    @property
    def size(self) -> int:
        return int(self.members.size)


def spectral_scale(X: CMatrix) -> float:
    return max(1.0, float(np.linalg.norm(X, 2)))


def cluster_eigenvalues(
    values: npt.ArrayLike, radius: float, real_cut: float = 0.0
) -> list[Cluster]:
    """
    Single-linkage clusters of eigenvalues at the given radius.

    Distinct clusters are more than radius apart. Eigenvalues closer than that
    share a cluster, whose compressed operator is then not nilpotent and is
    rejected further on. Centers within real_cut of the real axis are snapped
    onto it.
    """
    values = np.asarray(values, dtype=complex)
    if values.size == 1:
        labels = np.array([1])
    else:
        points = np.column_stack([values.real, values.imag])
        tree = scipy.cluster.hierarchy.linkage(points, method="single")
        labels = scipy.cluster.hierarchy.fcluster(tree, t=radius, criterion="distance")
    clusters = []
    for label in np.unique(labels):
        members = values[labels == label]
        center = complex(np.mean(members))
        if abs(center.imag) <= real_cut:
            center = complex(center.real, 0.0)
        clusters.append(Cluster(center, members))
    clusters.sort(key=lambda c: (round(c.center.real, 9), c.center.imag))
    logger.debug("clustered %d eigenvalues into %d clusters", values.size, len(clusters))
    return clusters


def _clusters_of(X: CMatrix, tol: float) -> tuple[list[Cluster], float]:
    """Clusters at the absolute radius CLUSTER_FACTOR·tol, plus the scale for rank cuts."""
    scale = spectral_scale(X)
    values = scipy.linalg.eigvals(X)
    clusters = cluster_eigenvalues(values, CLUSTER_FACTOR * tol, REAL_AXIS_FACTOR * tol)
    return clusters, scale


def _invariant_subspace(X: CMatrix, cluster: Cluster, radius: float) -> CMatrix:
    """Orthonormal basis of the invariant subspace for one cluster (ordered Schur)."""
    members = cluster.members

    def _select(z: complex) -> bool:
        return bool(np.min(np.abs(members - z)) <= radius)

    try:
        _, vectors, sdim = scipy.linalg.schur(X, output="complex", sort=_select)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise IllConditioned(f"could not reorder Schur form at {cluster.center:.6g}: {exc}") from exc
    if sdim != cluster.size:
        raise IllConditioned(
            f"ordered Schur form selected {sdim} eigenvalues at {cluster.center:.6g}, "
            f"expected {cluster.size}"
        )
    return vectors[:, :sdim]


def _power_kernel(R: CMatrix, k: int, tol: float, scale: float) -> CMatrix:
    """Orthonormal basis of ker R^k at the rank threshold tol·scale^k."""
    m = R.shape[0]
    if k == 0:
        return np.zeros((m, 0), dtype=complex)
    return nullspace(np.linalg.matrix_power(R, k), atol=tol * scale**k)


def nullity_chain(R: CMatrix, tol: float, scale: float) -> list[int]:
    """
    Dimensions d_0 = 0, d_1, ..., d_p = m of ker R^k for a nilpotent R.

    Raises:
        IllConditioned: If the kernel dimensions stop growing before m.
    """
    m = R.shape[0]
    dims = [0]
    for k in range(1, m + 1):
        d = _power_kernel(R, k, tol, scale).shape[1]
        if d < dims[-1]:
            d = dims[-1]
        dims.append(d)
        if d == m:
            return dims
        if d == dims[-2]:
            break
    raise IllConditioned(f"nullity chain {dims} does not reach the cluster size {m}")


def blocks_from_nullity_chain(dims: list[int]) -> dict[int, int]:
    """Number of Jordan blocks of each size r from the kernel dimensions."""
    p = len(dims) - 1
    extended = dims + [dims[-1]]
    counts = {}
    for r in range(1, p + 1):
        m_r = (extended[r] - extended[r - 1]) - (extended[r + 1] - extended[r])
        if m_r > 0:
            counts[r] = m_r
    return counts


def _compressed(X: CMatrix, basis: CMatrix, lam: complex) -> CMatrix:
    return basis.conj().T @ (X - lam * np.eye(X.shape[0])) @ basis


def _find_cluster(clusters: list[Cluster], lam: complex, radius: float) -> Cluster:
    best = min(clusters, key=lambda c: float(np.min(np.abs(c.members - lam))))
    if float(np.min(np.abs(best.members - lam))) > radius:
        raise NotAnEigenvalue(
            f"{lam:.6g} is not an eigenvalue within {radius:.3e}",
            float(np.min(np.abs(best.members - lam))),
            radius,
        )
    return best


def generalized_eigenspace(
    X: npt.ArrayLike, lam: complex, tol: float = JORDAN_TOL
) -> CMatrix:
    """
    Orthonormal basis of N_λ = ker (X − λ)^n.

    The cluster around λ is moved to the top of a complex Schur form; the
    compressed operator must then be nilpotent, which is confirmed by growing
    its kernel powers up to the cluster size.

    Raises:
        NotAnEigenvalue: If no eigenvalue lies within the cluster radius of λ.
        IllConditioned: If the cluster cannot be isolated.
    """
    _, basis = _locate(as_square(X), lam, tol)
    return basis


def _locate(X: CMatrix, lam: complex, tol: float) -> tuple[complex, CMatrix]:
    """Cluster center nearest λ and an orthonormal basis of its generalized eigenspace."""
    clusters, scale = _clusters_of(X, tol)
    radius = CLUSTER_FACTOR * tol
    cluster = _find_cluster(clusters, complex(lam), radius)
    basis = _invariant_subspace(X, cluster, radius)
    nullity_chain(_compressed(X, basis, cluster.center), tol, scale)
    return cluster.center, basis


def _head_space(R: CMatrix, r: int, tol: float, scale: float) -> CMatrix:
    """Complement of ker R^{r−1} + R·ker R^{r+1} inside ker R^r, compressed coordinates."""
    K_r = _power_kernel(R, r, tol, scale)
    if K_r.shape[1] == 0:
        return K_r
    spanning = np.concatenate(
        [_power_kernel(R, r - 1, tol, scale), R @ _power_kernel(R, r + 1, tol, scale)], axis=1
    )
    S = range_basis(spanning, atol=tol * scale) if spanning.shape[1] else spanning
    if S.shape[1] == 0:
        return K_r
    coords = nullspace(S.conj().T @ K_r, atol=0.5)
    return K_r @ coords


def chain_heads(
    X: npt.ArrayLike,
    lam: complex,
    r: int,
    tol: float = JORDAN_TOL,
    paired: bool | None = None,
    basis: CMatrix | None = None,
) -> CMatrix:
    """
    Heads of the Jordan chains of length exactly r at λ.

    Args:
        X: Square matrix.
        lam: Eigenvalue (its cluster center is used).
        r: Chain length.
        tol: Relative rank tolerance.
        paired: Return heads as Kramers pairs [h_1, 𝒯h_1, h_2, 𝒯h_2, ...].
            Defaults to true for quaternionic X and real λ.
        basis: Precomputed orthonormal basis of N_λ.

    Returns:
        Matrix whose columns are orthonormal chain heads (possibly none).
    """
    X = as_square(X)
    scale = spectral_scale(X)
    if basis is None:
        lam, basis = _locate(X, lam, tol)
    if paired is None:
        paired = bool(
            abs(complex(lam).imag) <= REAL_AXIS_FACTOR * tol
            and X.shape[0] % 2 == 0
            and classify(X, STRUCTURE_TOL).quaternionic
        )
    R = _compressed(X, basis, lam)
    heads = basis @ _head_space(R, r, tol, scale)
    if not paired or heads.shape[1] == 0:
        return heads
    kramers = _paired_heads(heads, lam)
    partners = kramers.partners
    columns = [
        col for k in range(kramers.heads.shape[1]) for col in (kramers.heads[:, k], partners[:, k])
    ]
    return np.stack(columns, axis=1)


def _paired_heads(heads: CMatrix, lam: complex) -> KramersBasis:
    try:
        return kramers_basis(heads)
    except OddKernel as exc:
        raise IllConditioned(f"odd number of chain heads at real eigenvalue {lam:.6g}") from exc


@dataclass(frozen=True)
class JordanResult:
    """
    X S = S J with a Kramers-paired Jordan basis S.

    Attributes:
        blocks: (eigenvalue, size) per Jordan block, in column order.
        pairing: Column index to the index of its 𝒯-partner column.
        condition: 2-norm condition number of S.
        residual: ‖XS − SJ‖_F.
        scale: max(1, ‖X‖_2).
    """

    S: CMatrix
    J: CMatrix
    blocks: list[tuple[complex, int]]
    pairing: dict[int, int]
    condition: float
    residual: float
    scale: float

    def block_sizes(self) -> list[int]:
        return sorted(size for _, size in self.blocks)

    def pairing_defect(self) -> float:
        """Largest ‖s_j ∓ 𝒯s_i‖/‖s_j‖ over recorded partners, best sign."""
        partners = apply_T(self.S)
        worst = 0.0
        for i, j in self.pairing.items():
            target = self.S[:, j]
            image = partners[:, i]
            gap = min(norm(target - image), norm(target + image)) / max(norm(target), 1e-300)
            worst = max(worst, gap)
        return worst

    def unmatched_blocks(self, radius: float = 1e-6) -> int:
        """Blocks whose conjugate partner (same size) is missing from the list."""
        pool = Counter(
            (round(lam.real / radius), round(lam.imag / radius), size) for lam, size in self.blocks
        )
        unmatched = 0
        for (re, im, size), count in pool.items():
            partner = pool.get((re, -im, size), 0)
            if im == 0:
                unmatched += count % 2
            elif partner != count:
                unmatched += abs(count - partner)
        return unmatched

    def checks(self, tol: float) -> list[Check]:
        return [
            Check.relative(
                "XS = SJ",
                self.residual,
                self.scale,
                tol,
                JORDAN_RESIDUAL_FACTOR * self.condition,
            ),
            Check("𝒯-pairing of columns", self.pairing_defect(), 10.0 * tol),
            Check("conjugate block pairing", float(self.unmatched_blocks()), 0.0),
            Check("basis condition", self.condition, MAX_CONDITION),
        ]


def jordan_block(lam: complex, size: int) -> CMatrix:
    return lam * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)


def jordan_quaternionic(
    X: npt.ArrayLike, tol: float = JORDAN_TOL, structure_tol: float = STRUCTURE_TOL
) -> JordanResult:
    """
    Jordan form of a quaternionic matrix with a basis of pairs (v, 𝒯v).

    For Im λ > 0 a Jordan basis of N_λ is pushed through 𝒯 into N_{conj λ};
    for real λ the chains grow from Kramers-paired heads and each chain's
    partner chain is its image under 𝒯.

    Raises:
        NotQuaternionic: If X is not quaternionic.
        IllConditioned: If clusters are too close or the basis is singular.
    """
    X = ensure_quaternionic(X, structure_tol)
    n2 = X.shape[0]
    clusters, scale = _clusters_of(X, tol)
    radius = CLUSTER_FACTOR * tol

    columns: list[npt.NDArray] = []
    blocks: list[tuple[complex, int]] = []
    pairing: dict[int, int] = {}

    def _add_chain_pair(chain: list[npt.NDArray], lam: complex, partner_lam: complex) -> None:
        r = len(chain)
        start = len(columns)
        columns.extend(chain)
        columns.extend(apply_T(np.stack(chain, axis=1)).T)
        blocks.append((lam, r))
        blocks.append((partner_lam, r))
        for k in range(r):
            pairing[start + k] = start + r + k
            pairing[start + r + k] = start + k

    for cluster in clusters:
        lam = cluster.center
        if lam.imag < 0:
            continue
        real = lam.imag == 0.0
        basis = _invariant_subspace(X, cluster, radius)
        R = _compressed(X, basis, lam)
        dims = nullity_chain(R, tol, scale)
        counts = blocks_from_nullity_chain(dims)
        if sum(r * m for r, m in counts.items()) != cluster.size:
            raise IllConditioned(f"block sizes {counts} do not fill the cluster at {lam:.6g}")
        logger.debug("cluster %.6g: size %d, blocks %s", lam, cluster.size, counts)

        for r in sorted(counts, reverse=True):
            heads = basis @ _head_space(R, r, tol, scale)
            if real:
                heads = _paired_heads(heads, lam).heads
            for k in range(heads.shape[1]):
                y = basis.conj().T @ heads[:, k]
                chain = [basis @ (np.linalg.matrix_power(R, r - 1 - j) @ y) for j in range(r)]
                _add_chain_pair(chain, lam, lam.conjugate())

    if len(columns) != n2:
        raise IllConditioned(f"Jordan basis has {len(columns)} columns, expected {n2}")

    S = np.stack(columns, axis=1)
    J = scipy.linalg.block_diag(*(jordan_block(lam, r) for lam, r in blocks)).astype(complex)
    condition = float(np.linalg.cond(S))
    if not np.isfinite(condition) or condition > MAX_CONDITION:
        raise IllConditioned(f"Jordan basis is numerically singular (cond {condition:.3e})")
    residual = norm(X @ S - S @ J)
    logger.info("Jordan form: %d blocks, cond(S)=%.3e", len(blocks), condition)
    return JordanResult(S, J, blocks, pairing, condition, residual, scale)
