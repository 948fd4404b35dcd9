"""Unit tests for self-dual and symmetric factorizations and the tensor identities."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.embedding import classify, dual
from src.errors import NotHermitian, NotSelfDual, NotSymmetric, ShapeError
from src.factor_selfdual import (
    diagonalize_hermitian_selfdual,
    polar_selfdual,
    polar_symmetric,
    schur_selfdual_commuting,
    tensor_mixed_dual,
    tensor_report,
    tensor_transpose_unitary,
    verify_tensor_transpose,
    verify_triple_dual,
)
from src.kernels import make_rng
from src.testkit import (
    GenSpec,
    StructureClass,
    generate,
    random_complex,
    random_symplectic_unitary,
)

TOL = 1e-10


def _failed(result) -> list[str]:
    return [check.name for check in result.checks(TOL) if not check.passed]


class TestSelfDualSchur:
    """Tests for the simultaneous self-dual Schur form."""

    def setup_method(self) -> None:
        """Create a seeded commuting self-dual family."""
        self.family = generate(
            GenSpec(3, StructureClass.COMMUTING_FAMILY, seed=31, base=StructureClass.SELFDUAL)
        )

    def test_family_checks_pass(self) -> None:
        """Test reconstruction, triangularity and the skew corner block."""
        result = schur_selfdual_commuting(self.family, seed=31)
        assert _failed(result) == []

    def test_block_form_reconstructs(self) -> None:
        """Test U*X_jU = [[T_j, C_j], [0, T_j^T]]."""
        result = schur_selfdual_commuting(self.family, seed=31)
        for j, X in enumerate(self.family):
            M = result.U.conj().T @ X @ result.U
            assert np.linalg.norm(M - result.block_form(j)) < 1e-9 * np.linalg.norm(X)

    def test_corner_is_skew(self) -> None:
        """Test C_j^T = −C_j."""
        result = schur_selfdual_commuting(self.family, seed=31)
        for C in result.C:
            assert_allclose(C.T, -C)

    def test_unitary_is_symplectic(self) -> None:
        """Test that the Schur unitary is symplectic."""
        result = schur_selfdual_commuting(self.family, seed=31)
        report = classify(result.U, tol=1e-10)
        assert report.unitary and report.symplectic

    def test_rejects_non_selfdual(self) -> None:
        """Test that a generic complex matrix is rejected."""
        with pytest.raises(NotSelfDual):
            schur_selfdual_commuting([random_complex(make_rng(1), 4)])


class TestHermitianSelfDual:
    """Tests for the diagonalization of Hermitian self-dual matrices."""

    def test_planted_spectrum(self) -> None:
        """Test that U diag(d, d) U* gives back d."""
        d = np.array([-1.0, 0.5, 2.0])
        U = random_symplectic_unitary(make_rng(3), 3)
        X = U @ np.diag(np.concatenate([d, d])) @ U.conj().T
        result = diagonalize_hermitian_selfdual(X, seed=3)
        assert _failed(result) == []
        assert_allclose(np.sort(result.D[0].real), d, atol=1e-9)
        assert np.max(np.abs(result.D[0].imag)) == 0.0

    def test_rejects_non_hermitian(self) -> None:
        """Test that a self-dual but non-Hermitian matrix is rejected."""
        X = generate(GenSpec(2, StructureClass.SELFDUAL, seed=4))
        with pytest.raises(NotHermitian):
            diagonalize_hermitian_selfdual(X)


class TestStructuredPolar:
    """Tests for the symmetric and self-dual polar decompositions."""

    def test_symmetric(self) -> None:
        """Test X = U|X| with U^T = U for a random symmetric X."""
        X = generate(GenSpec(3, StructureClass.SYMMETRIC, seed=5))
        result = polar_symmetric(X)
        assert _failed(result) == []
        assert_allclose(result.U, result.U.T, atol=1e-12)

    def test_symmetric_odd_dimension(self) -> None:
        """Test that odd dimension is accepted."""
        G = random_complex(make_rng(6), 3)
        X = 0.5 * (G + G.T)
        result = polar_symmetric(X)
        assert result.reconstruction < 1e-10 * result.scale
        report = classify(result.U, tol=1e-10)
        assert report.unitary and report.symmetric

    def test_symmetric_rank_deficient(self) -> None:
        """Test the kernel is filled in symmetrically."""
        X = generate(GenSpec(3, StructureClass.SYMMETRIC, seed=7, rank=1))
        result = polar_symmetric(X)
        assert result.reconstruction < 1e-9 * result.scale
        report = classify(result.U, tol=1e-9)
        assert report.unitary and report.symmetric

    def test_symmetric_rejects_non_symmetric(self) -> None:
        """Test that X^T ≠ X is rejected."""
        with pytest.raises(NotSymmetric):
            polar_symmetric(random_complex(make_rng(8), 2))

    def test_symmetric_small_singular_value(self) -> None:
        """Test that diag(1, 1e-7) keeps its small singular value."""
        result = polar_symmetric(np.diag([1.0, 1e-7]))
        assert _failed(result) == []
        assert_allclose(result.P, np.diag([1.0, 1e-7]), atol=1e-15)
        assert_allclose(result.U, np.eye(2), atol=1e-12)


    def test_selfdual(self) -> None:
        """Test X = U|X| with U^♯ = U for a random self-dual X."""
        X = generate(GenSpec(2, StructureClass.SELFDUAL, seed=9))
        result = polar_selfdual(X)
        assert _failed(result) == []
        assert_allclose(dual(result.U), result.U, atol=1e-11)

    def test_selfdual_rank_deficient(self) -> None:
        """Test a self-dual X of rank two."""
        X = generate(GenSpec(3, StructureClass.SELFDUAL, seed=10, rank=1))
        result = polar_selfdual(X)
        assert result.reconstruction < 1e-9 * result.scale
        report = classify(result.U, tol=1e-9)
        assert report.unitary and report.selfdual

    def test_selfdual_rejects_non_selfdual(self) -> None:
        """Test that X^♯ ≠ X is rejected."""
        with pytest.raises(NotSelfDual):
            polar_selfdual(random_complex(make_rng(11), 4))


class TestTensorIdentities:
    """Tests for the transpose and dual identities on tensor products."""

    def test_unitary_is_symmetric(self) -> None:
        """Test U^T = U and U*U = I."""
        U = tensor_transpose_unitary(2, 1)
        assert_allclose(U, U.T)
        assert_allclose(U.conj().T @ U, np.eye(8), atol=1e-15)

    def test_unitary_rejects_zero_size(self) -> None:
        """Test that both sizes must be positive."""
        with pytest.raises(ShapeError):
            tensor_transpose_unitary(0, 1)

    def test_transpose_identity(self) -> None:
        """Test U*(X^♯⊗Y^♯)U = (U*(X⊗Y)U)^T for random X and Y."""
        rng = make_rng(12)
        X = random_complex(rng, 4)
        Y = random_complex(rng, 2)
        bound = np.linalg.norm(X) * np.linalg.norm(Y)
        assert verify_tensor_transpose(X, Y) < 1e-12 * bound

    def test_transpose_identity_needs_even_dimension(self) -> None:
        """Test that X of odd dimension is rejected."""
        rng = make_rng(13)
        with pytest.raises(ShapeError):
            verify_tensor_transpose(random_complex(rng, 3), random_complex(rng, 2))

    def test_mixed_dual(self) -> None:
        """Test X^T⊗Y^♯ = (X⊗Y)^♯ with X of odd dimension."""
        rng = make_rng(14)
        X = random_complex(rng, 3)
        Y = random_complex(rng, 4)
        assert tensor_mixed_dual(X, Y) < 1e-12 * np.linalg.norm(X) * np.linalg.norm(Y)

    def test_report_checks(self) -> None:
        """Test that both identities pass on a quaternionic and a self-dual factor."""
        X = generate(GenSpec(2, StructureClass.QUATERNIONIC, seed=15))
        Y = generate(GenSpec(1, StructureClass.SELFDUAL, seed=16))
        report = tensor_report(X, Y)
        assert _failed(report) == []

    def test_report_skips_transpose_for_odd_dimension(self) -> None:
        """Test that only the mixed identity is evaluated for odd X."""
        rng = make_rng(17)
        report = tensor_report(random_complex(rng, 3), random_complex(rng, 2))
        assert report.transpose_residual == 0.0
        assert _failed(report) == []

    def test_three_duals_become_one(self) -> None:
        """Test V*(X^♯⊗Y^♯⊗W^♯)V = (V*(X⊗Y⊗W)V)^♯ for 2×2 factors."""
        rng = make_rng(18)
        X, Y, W = (random_complex(rng, 2) for _ in range(3))
        bound = np.linalg.norm(X) * np.linalg.norm(Y) * np.linalg.norm(W)
        assert verify_triple_dual(X, Y, W) < 1e-11 * bound

    def test_three_duals_need_even_dimensions(self) -> None:
        """Test that an odd third factor is rejected."""
        rng = make_rng(19)
        with pytest.raises(ShapeError):
            verify_triple_dual(random_complex(rng, 2), random_complex(rng, 2), np.eye(3))

