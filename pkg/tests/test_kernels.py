"""Unit tests for the dense complex kernels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import NotCommuting, NotHermitian, NotPositiveSemidefinite
from src.kernels import (
    check_commuting,
    common_eigenvector,
    hermitian_eig,
    herm_fun,
    make_rng,
    nullspace,
    range_basis,
    svd_complex,
)
from src.testkit import GenSpec, StructureClass, generate, random_complex


class TestHermitianEig:
    """Tests for the Hermitian eigensolver."""

    def test_eigenvalues_ascending(self) -> None:
        """Test the spectrum of [[2, 1], [1, 2]]."""
        result = hermitian_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
        assert_allclose(result.values, [1.0, 3.0])
        assert result.residual(np.array([[2.0, 1.0], [1.0, 2.0]])) < 1e-14

    def test_rejects_non_hermitian(self) -> None:
        """Test that a nilpotent matrix is rejected."""
        with pytest.raises(NotHermitian):
            hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestCommonEigenvector:
    """Tests for the common eigenvector of a commuting family."""

    def test_diagonal_family(self) -> None:
        """Test a family of diagonal matrices."""
        X = np.diag([1.0, 1.0, 2.0])
        Y = np.diag([3.0, 4.0, 4.0])
        v, lambdas = common_eigenvector([X, Y])
        assert np.linalg.norm(v) == pytest.approx(1.0)
        assert np.linalg.norm(X @ v - lambdas[0] * v) < 1e-10
        assert np.linalg.norm(Y @ v - lambdas[1] * v) < 1e-10

    def test_generated_family(self) -> None:
        """Test a seeded commuting quaternionic family."""
        family = generate(GenSpec(3, StructureClass.COMMUTING_FAMILY, seed=4))
        v, lambdas = common_eigenvector(family, seed=4)
        for X, lam in zip(family, lambdas):
            assert np.linalg.norm(X @ v - lam * v) < 1e-8 * np.linalg.norm(X)

    def test_scalar_family(self) -> None:
        """Test that a scalar family accepts any vector."""
        v, lambdas = common_eigenvector([2.0 * np.eye(3)])
        assert lambdas[0] == pytest.approx(2.0)

    def test_reproducible(self) -> None:
        """Test that the seed fixes the result."""
        family = generate(GenSpec(2, StructureClass.COMMUTING_FAMILY, seed=1))
        v1, _ = common_eigenvector(family, seed=7)
        v2, _ = common_eigenvector(family, seed=7)
        assert_allclose(v1, v2)

    def test_non_commuting(self) -> None:
        """Test that a non-commuting pair is rejected."""
        X = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(NotCommuting):
            common_eigenvector([X, X.T])

    def test_check_commuting_passes(self) -> None:
        """Test that powers of one matrix commute."""
        X = random_complex(make_rng(2), 4)
        check_commuting([X, X @ X, np.eye(4)])


class TestSvdAndFunctions:
    """Tests for the SVD, functional calculus and subspace bases."""

    def test_svd_reconstruction(self) -> None:
        """Test X = U diag(s) V*."""
        X = random_complex(make_rng(1), 5, 3)
        U, s, V = svd_complex(X)
        assert np.all(np.diff(s) <= 0)
        assert_allclose(U[:, :3] * s @ V.conj().T, X, atol=1e-13)

    def test_inverse_square_root_on_support(self) -> None:
        """Test λ^{−1/2} on diag(4, 0) gives diag(1/2, 0)."""
        assert_allclose(herm_fun(np.diag([4.0, 0.0]), lambda lam: lam**-0.5), np.diag([0.5, 0.0]))

    def test_square_root(self) -> None:
        """Test that the square root squares back."""
        H = np.array([[2.0, 1.0], [1.0, 2.0]])
        root = herm_fun(H, np.sqrt)
        assert_allclose(root @ root, H, atol=1e-14)

    def test_rejects_negative_eigenvalue(self) -> None:
        """Test that diag(1, −1) is not positive semidefinite."""
        with pytest.raises(NotPositiveSemidefinite):
            herm_fun(np.diag([1.0, -1.0]), np.sqrt)

    def test_nullspace_of_rank_one(self) -> None:
        """Test ker [[1, 1], [1, 1]] is spanned by (1, −1)/√2."""
        K = nullspace(np.array([[1.0, 1.0], [1.0, 1.0]]))
        assert K.shape == (2, 1)
        assert abs(abs(np.vdot(K[:, 0], np.array([1.0, -1.0]) / np.sqrt(2))) - 1.0) < 1e-14

    def test_nullspace_of_zero(self) -> None:
        """Test that the zero matrix has the whole space as kernel."""
        assert nullspace(np.zeros((2, 3))).shape == (3, 3)

    def test_nullspace_of_identity(self) -> None:
        """Test that the identity has a trivial kernel."""
        assert nullspace(np.eye(3)).shape == (3, 0)

    def test_nullspace_absolute_threshold(self) -> None:
        """Test the absolute cut used for partial isometries."""
        assert nullspace(np.diag([1.0, 0.4]), atol=0.5).shape == (2, 1)

    def test_range_basis(self) -> None:
        """Test the column space of a rank-one matrix."""
        R = range_basis(np.array([[1.0, 2.0], [2.0, 4.0]]))
        assert R.shape == (2, 1)

    def test_rng_reproducible(self) -> None:
        """Test that equal seeds give equal draws."""
        assert_allclose(make_rng(3).standard_normal(4), make_rng(3).standard_normal(4))
