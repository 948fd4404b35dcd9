"""Unit tests for eigenvalue clustering and the Kramers-paired Jordan form."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.embedding import apply_T
from src.errors import IllConditioned, NotAnEigenvalue, NotQuaternionic
from src.jordan import (
    blocks_from_nullity_chain,
    chain_heads,
    cluster_eigenvalues,
    generalized_eigenspace,
    jordan_block,
    jordan_quaternionic,
    nullity_chain,
)
from src.testkit import plant_jordan, random_jordan_blocks

TOL = 1e-10


def _planted_sizes(blocks: list[tuple[complex, int]]) -> list[int]:
    return sorted(size for _, size in blocks for _ in range(2))


class TestClustering:
    """Tests for single-linkage eigenvalue clustering."""

    def test_groups_close_values(self) -> None:
        """Test that 0 and 1e-6 merge while 1 stays apart."""
        clusters = cluster_eigenvalues([0.0, 1e-6, 1.0], radius=1e-3)
        assert [c.size for c in clusters] == [2, 1]
        assert clusters[0].center == pytest.approx(5e-7)

    def test_single_value(self) -> None:
        """Test one eigenvalue forms one cluster."""
        clusters = cluster_eigenvalues([2.0], radius=1e-3)
        assert len(clusters) == 1
        assert clusters[0].center == 2.0

    def test_snaps_to_real_axis(self) -> None:
        """Test that a center within real_cut of the axis becomes real."""
        clusters = cluster_eigenvalues([1.0 + 1e-9j], radius=1e-3, real_cut=1e-6)
        assert clusters[0].center.imag == 0.0

    def test_separates_at_radius(self) -> None:
        """Test that values 1.5 radii apart form two clusters."""
        clusters = cluster_eigenvalues([0.0, 1.5e-3], radius=1e-3)
        assert [c.size for c in clusters] == [1, 1]

    def test_merges_within_radius(self) -> None:
        """Test that values half a radius apart share one cluster."""
        clusters = cluster_eigenvalues([0.0, 5e-4, 1.0], radius=1e-3)
        assert [c.size for c in clusters] == [2, 1]



class TestNullityChain:
    """Tests for kernel dimensions of nilpotent powers."""

    def test_single_block(self) -> None:
        """Test a nilpotent block of size three."""
        assert nullity_chain(jordan_block(0.0, 3), tol=TOL, scale=1.0) == [0, 1, 2, 3]

    def test_zero_matrix(self) -> None:
        """Test that the zero matrix is reached in one step."""
        assert nullity_chain(np.zeros((2, 2), dtype=complex), tol=TOL, scale=1.0) == [0, 2]

    def test_rejects_non_nilpotent(self) -> None:
        """Test that the identity never reaches its size."""
        with pytest.raises(IllConditioned):
            nullity_chain(np.eye(2, dtype=complex), tol=TOL, scale=1.0)

    def test_block_counts(self) -> None:
        """Test block counts from kernel dimensions."""
        assert blocks_from_nullity_chain([0, 1, 2, 3]) == {3: 1}
        assert blocks_from_nullity_chain([0, 2, 3]) == {1: 1, 2: 1}
        assert blocks_from_nullity_chain([0, 2]) == {1: 2}

    def test_jordan_block(self) -> None:
        """Test λI plus the superdiagonal."""
        assert_allclose(jordan_block(2.0, 3), [[2, 1, 0], [0, 2, 1], [0, 0, 2]])


class TestGeneralizedEigenspace:
    """Tests for generalized eigenspaces and chain heads."""

    def setup_method(self) -> None:
        """Plant a block of size two at i and one of size one at 0."""
        self.X = plant_jordan([(1j, 2), (0.0, 1)], seed=1)

    def test_dimensions(self) -> None:
        """Test dim N_i = 2 and dim N_0 = 2."""
        assert generalized_eigenspace(self.X, 1j).shape == (6, 2)
        assert generalized_eigenspace(self.X, 0.0).shape == (6, 2)

    def test_basis_is_orthonormal(self) -> None:
        """Test that the basis has orthonormal columns."""
        basis = generalized_eigenspace(self.X, 1j)
        assert_allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12)

    def test_not_an_eigenvalue(self) -> None:
        """Test that λ = 5 is rejected."""
        with pytest.raises(NotAnEigenvalue):
            generalized_eigenspace(self.X, 5.0)

    def test_paired_heads_at_real_eigenvalue(self) -> None:
        """Test that a doubled real block yields one Kramers pair of heads."""
        X = plant_jordan([(1.0, 2)], seed=2)
        heads = chain_heads(X, 1.0, 2)
        assert heads.shape == (4, 2)
        assert_allclose(heads[:, 1], apply_T(heads[:, 0]), atol=1e-12)

    def test_no_heads_of_other_length(self) -> None:
        """Test that there are no chains of length one."""
        X = plant_jordan([(1.0, 2)], seed=2)
        assert chain_heads(X, 1.0, 1).shape[1] == 0

    def test_heads_of_diagonalizable_cluster(self) -> None:
        """Test that a semisimple real eigenvalue keeps its whole eigenspace as heads."""
        X = plant_jordan([(2.0, 1), (1j, 1)], seed=7)
        heads = chain_heads(X, 2.0, 1)
        assert heads.shape == (4, 2)
        assert_allclose(X @ heads, 2.0 * heads, atol=1e-8)

    def test_partner_chains_at_conjugate(self) -> None:
        """Test that 𝒯 carries a chain at λ to one at conj(λ) of the same length."""
        X = plant_jordan([(1 + 1j, 2)], seed=4)
        head = chain_heads(X, 1 + 1j, 2)[:, 0]
        shifted = X - (1 - 1j) * np.eye(X.shape[0])
        partner = apply_T(head)
        assert np.linalg.norm(shifted @ shifted @ partner) < 1e-8
        assert np.linalg.norm(shifted @ partner) > 1e-3



class TestJordanForm:
    """Tests for the Kramers-paired Jordan form."""

    @pytest.mark.parametrize(
        "blocks",
        [
            [(1j, 2), (0.0, 1)],
            [(1.0, 2)],
            [(1 + 1j, 3)],
        ],
    )
    def test_planted_blocks(self, blocks: list[tuple[complex, int]]) -> None:
        """Test that planted block sizes are recovered and all checks pass."""
        X = plant_jordan(blocks, seed=5)
        result = jordan_quaternionic(X)
        assert result.block_sizes() == _planted_sizes(blocks)
        assert [c.name for c in result.checks(TOL) if not c.passed] == []

    @pytest.mark.parametrize("seed", range(5))
    def test_random_blocks(self, seed: int) -> None:
        """Test random planted Jordan structures."""
        blocks = random_jordan_blocks(seed)
        result = jordan_quaternionic(plant_jordan(blocks, seed=seed))
        assert result.block_sizes() == _planted_sizes(blocks)
        assert [c.name for c in result.checks(TOL) if not c.passed] == []

    def test_reconstructs(self) -> None:
        """Test X = S J S^{-1}."""
        X = plant_jordan([(1j, 2), (0.0, 1)], seed=6)
        result = jordan_quaternionic(X)
        assert_allclose(result.S @ result.J @ np.linalg.inv(result.S), X, atol=1e-8)

    def test_columns_are_paired(self) -> None:
        """Test that every column has a time-reversed partner."""
        result = jordan_quaternionic(plant_jordan([(2.0, 1), (1j, 1)], seed=7))
        assert len(result.pairing) == result.S.shape[1]
        assert result.pairing_defect() == 0.0

    def test_conjugate_blocks(self) -> None:
        """Test that a block at λ comes with one at conj(λ)."""
        result = jordan_quaternionic(plant_jordan([(1 + 1j, 2)], seed=8))
        assert result.unmatched_blocks() == 0
        values = sorted(result.blocks, key=lambda block: block[0].imag)
        assert values[0][0] == pytest.approx(1 - 1j, abs=1e-6)
        assert values[1][0] == pytest.approx(1 + 1j, abs=1e-6)

    def test_rejects_non_quaternionic(self) -> None:
        """Test that diag(1, 2) is rejected."""
        with pytest.raises(NotQuaternionic):
            jordan_quaternionic(np.diag([1.0, 2.0]))

    def test_close_eigenvalues(self) -> None:
        """Test that eigenvalues 1.5e-3 apart are resolved separately."""
        result = jordan_quaternionic(plant_jordan([(0.0, 1), (1.5e-3, 1)], spread=0.0))
        assert result.block_sizes() == [1, 1, 1, 1]
        assert [c.name for c in result.checks(TOL) if not c.passed] == []

    def test_close_to_sized_block(self) -> None:
        """Test a simple eigenvalue 2e-3 away from a block of size two."""
        blocks = [(1.0, 2), (1.002, 1)]
        result = jordan_quaternionic(plant_jordan(blocks, seed=9))
        assert result.block_sizes() == _planted_sizes(blocks)
        assert [c.name for c in result.checks(TOL) if not c.passed] == []

    def test_block_of_size_four(self) -> None:
        """Test a real block of size four."""
        result = jordan_quaternionic(plant_jordan([(-1.0, 4)], seed=10))
        assert result.block_sizes() == [4, 4]
        assert [c.name for c in result.checks(TOL) if not c.passed] == []

    def test_merged_cluster_is_ill_conditioned(self) -> None:
        """Test that eigenvalues inside one cluster radius are rejected."""
        with pytest.raises(IllConditioned):
            jordan_quaternionic(plant_jordan([(0.0, 1), (5e-4, 1)], spread=0.0))

    def test_random_draws_cover_the_regime(self) -> None:
        """Test that the generator reaches size-four blocks and close neighbours."""
        draws = [random_jordan_blocks(seed) for seed in range(40)]
        assert max(size for blocks in draws for _, size in blocks) == 4
        gaps = [
            min(abs(a - b) for i, (a, _) in enumerate(blocks) for b, _ in blocks[i + 1 :])
            for blocks in draws
            if len(blocks) > 1
        ]
        assert min(gaps) < 3e-3

