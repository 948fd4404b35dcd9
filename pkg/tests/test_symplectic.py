"""Unit tests for Kramers bases, symplectic completion and isometry extensions."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.embedding import Z, apply_T, classify, dual
from src.errors import NotOrthogonal, NotPartialIsometry, NotUnit, OddKernel, ShapeError
from src.kernels import make_rng, nullspace
from src.symplectic import (
    complete_symplectic,
    ensure_partial_isometry,
    extend_quaternionic_isometry,
    extend_selfdual_isometry,
    extend_symmetric_isometry,
    kramers_basis,
    kramers_rank2_isometry,
)
from src.testkit import GenSpec, StructureClass, generate, random_unit_vector


def _is_symplectic_unitary(U: np.ndarray, tol: float = 1e-12) -> bool:
    n = U.shape[0] // 2
    unitary = np.linalg.norm(U.conj().T @ U - np.eye(2 * n)) <= tol
    symplectic = np.linalg.norm(U.T @ Z(n) @ U - Z(n)) <= tol
    return bool(unitary and symplectic)


class TestKramersBasis:
    """Tests for Kramers-paired bases."""

    def test_full_space(self) -> None:
        """Test that a basis of ℂ^{2N} comes out as a symplectic unitary."""
        basis = kramers_basis(np.eye(6, dtype=complex))
        assert _is_symplectic_unitary(basis.as_unitary())

    def test_pairs(self) -> None:
        """Test that partners are the time-reversed heads."""
        basis = kramers_basis(np.eye(4, dtype=complex))
        for head, partner in basis.pairs:
            assert_allclose(partner, apply_T(head))

    def test_odd_dimension(self) -> None:
        """Test that an odd subspace cannot be paired."""
        with pytest.raises(OddKernel):
            kramers_basis(np.eye(4, dtype=complex)[:, :3])


class TestCompleteSymplectic:
    """Tests for completing a unit vector to a symplectic unitary."""

    def test_first_basis_vector_gives_identity(self) -> None:
        """Test that e_1 completes to I."""
        e1 = np.zeros(6, dtype=complex)
        e1[0] = 1.0
        assert_allclose(complete_symplectic(e1), np.eye(6))

    def test_second_basis_vector(self) -> None:
        """Test that e_2 in ℂ² completes to [[0, −1], [1, 0]]."""
        assert_allclose(complete_symplectic([0.0, 1.0]), [[0, -1], [1, 0]])

    def test_random_vector(self) -> None:
        """Test that a random unit vector becomes the first column."""
        v = random_unit_vector(make_rng(3), 8)
        U = complete_symplectic(v)
        assert_allclose(U[:, 0], v)
        assert_allclose(U[:, 4], apply_T(v))
        assert _is_symplectic_unitary(U)

    def test_determinant_one(self) -> None:
        """Test det U = 1."""
        U = complete_symplectic(random_unit_vector(make_rng(4), 6))
        assert abs(np.linalg.det(U) - 1.0) < 1e-12

    def test_rejects_non_unit(self) -> None:
        """Test that the vector must have norm one."""
        with pytest.raises(NotUnit):
            complete_symplectic([2.0, 0.0])

    def test_rejects_odd_length(self) -> None:
        """Test that the length must be even."""
        with pytest.raises(ShapeError):
            complete_symplectic([1.0, 0.0, 0.0])


class TestIsometryExtensions:
    """Tests for extending structured partial isometries to unitaries."""

    def test_rank2_isometry_on_basis(self) -> None:
        """Test that e_1, e_2 in ℂ² give −I."""
        assert_allclose(kramers_rank2_isometry([1.0, 0.0], [0.0, 1.0]), -np.eye(2))

    def test_rank2_isometry_is_selfdual(self) -> None:
        """Test V^♯ = V and the images of v and w."""
        rng = make_rng(5)
        v = random_unit_vector(rng, 6)
        w = random_unit_vector(rng, 6)
        w = w - np.vdot(v, w) * v
        w = w / np.linalg.norm(w)
        V = kramers_rank2_isometry(v, w)
        assert_allclose(dual(V), V, atol=1e-14)
        assert_allclose(V @ v, apply_T(w), atol=1e-14)
        assert_allclose(V @ w, -apply_T(v), atol=1e-14)

    def test_rank2_isometry_needs_orthogonal_pair(self) -> None:
        """Test that overlapping vectors are rejected."""
        with pytest.raises(NotOrthogonal):
            kramers_rank2_isometry([1.0, 0.0], np.array([1.0, 1.0]) / np.sqrt(2))

    def test_selfdual_extension_of_zero(self) -> None:
        """Test that W = 0 extends to a self-dual unitary."""
        U = extend_selfdual_isometry(np.zeros((2, 2)))
        assert_allclose(U.conj().T @ U, np.eye(2), atol=1e-14)
        assert_allclose(dual(U), U, atol=1e-14)

    def test_selfdual_extension(self) -> None:
        """Test a rank-deficient self-dual partial isometry."""
        W = generate(GenSpec(3, StructureClass.SELFDUAL_PARTIAL_ISOMETRY, seed=2, rank=1))
        U = extend_selfdual_isometry(W)
        report = classify(U, tol=1e-10)
        assert report.unitary and report.selfdual
        assert_allclose(U @ (W.conj().T @ W), W, atol=1e-12)

    def test_quaternionic_extension(self) -> None:
        """Test that a quaternionic partial isometry extends to a symplectic unitary."""
        W = generate(GenSpec(3, StructureClass.QUATERNIONIC_PARTIAL_ISOMETRY, seed=6))
        U = extend_quaternionic_isometry(W)
        assert _is_symplectic_unitary(U, tol=1e-11)
        assert_allclose(U @ (W.conj().T @ W), W, atol=1e-12)

    def test_symmetric_extension(self) -> None:
        """Test that a symmetric partial isometry extends to a symmetric unitary."""
        W = generate(GenSpec(2, StructureClass.SYMMETRIC_PARTIAL_ISOMETRY, seed=7))
        U = extend_symmetric_isometry(W)
        report = classify(U, tol=1e-10)
        assert report.unitary and report.symmetric

    def test_rejects_non_isometry(self) -> None:
        """Test that 2I is not a partial isometry."""
        with pytest.raises(NotPartialIsometry):
            ensure_partial_isometry(2.0 * np.eye(2))

    def test_quaternionic_kernel_is_reversal_closed(self) -> None:
        """Test that 𝒯 maps ker W into ker W for a quaternionic partial isometry."""
        W = generate(GenSpec(3, StructureClass.QUATERNIONIC_PARTIAL_ISOMETRY, seed=8))
        K = nullspace(W)
        assert K.shape[1] == 4
        assert np.linalg.norm(W @ apply_T(K)) < 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_selfdual_initial_space(self, seed: int) -> None:
        """Test even rank and the action of W*𝒯 on the initial space."""
        rank = 1 + seed % 2
        W = generate(
            GenSpec(3, StructureClass.SELFDUAL_PARTIAL_ISOMETRY, seed=seed, rank=rank)
        )
        assert np.linalg.matrix_rank(W.conj().T @ W, tol=1e-8) == 2 * rank
        v = W.conj().T @ random_unit_vector(make_rng(seed + 100), 6)
        v = v / np.linalg.norm(v)
        partner = W.conj().T @ apply_T(v)
        assert abs(np.vdot(v, partner)) < 1e-10
        assert_allclose(W.conj().T @ apply_T(partner), -v, atol=1e-10)

