"""Unit tests for the seeded generators and residual reports."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.checks import Check
from src.embedding import classify
from src.testkit import (
    JORDAN_EIGENVALUES,
    GenSpec,
    StructureClass,
    expected_flags,
    generate,
    plant_jordan,
    random_jordan_blocks,
    residual_report,
)

SINGLE_CLASSES = [kind for kind in StructureClass if kind is not StructureClass.COMMUTING_FAMILY]


class TestGenerators:
    """Tests for structure-class generators."""

    @pytest.mark.parametrize("kind", SINGLE_CLASSES, ids=lambda kind: kind.value)
    def test_flags_hold(self, kind: StructureClass) -> None:
        """Test that every generated matrix carries the flags of its class."""
        X = generate(GenSpec(3, kind, seed=2))
        assert X.shape == (6, 6)
        assert expected_flags(kind) <= set(classify(X, tol=1e-9).holding())

    @pytest.mark.parametrize(
        "base",
        [StructureClass.QUATERNIONIC, StructureClass.SELFDUAL, StructureClass.NORMAL_QUATERNIONIC],
        ids=lambda kind: kind.value,
    )
    def test_family_members_commute(self, base: StructureClass) -> None:
        """Test that family members commute and keep the base structure."""
        family = generate(GenSpec(2, StructureClass.COMMUTING_FAMILY, seed=3, base=base))
        assert len(family) == 3
        X, Y = family[0], family[1]
        assert np.linalg.norm(X @ Y - Y @ X) < 1e-12 * np.linalg.norm(X) * np.linalg.norm(Y)
        for member in family:
            assert expected_flags(base) <= set(classify(member, tol=1e-9).holding())

    def test_reproducible(self) -> None:
        """Test that equal seeds give equal matrices."""
        first = generate(GenSpec(2, StructureClass.SELFDUAL, seed=9))
        second = generate(GenSpec(2, StructureClass.SELFDUAL, seed=9))
        assert_allclose(first, second)

    def test_seeds_differ(self) -> None:
        """Test that different seeds give different matrices."""
        first = generate(GenSpec(2, StructureClass.QUATERNIONIC, seed=1))
        second = generate(GenSpec(2, StructureClass.QUATERNIONIC, seed=2))
        assert not np.allclose(first, second)

    def test_rank(self) -> None:
        """Test that rank counts Kramers pairs."""
        X = generate(GenSpec(3, StructureClass.QUATERNIONIC, seed=4, rank=1))
        assert np.linalg.matrix_rank(X, tol=1e-10) == 2

    def test_zero_rank(self) -> None:
        """Test that rank zero gives the zero matrix."""
        X = generate(GenSpec(2, StructureClass.HERMITIAN_QUATERNIONIC, seed=4, rank=0))
        assert not np.any(X)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"size": 0},
            {"size": 2, "rank": 3},
            {"size": 2, "family_size": 0},
            {"size": 2, "base": StructureClass.COMMUTING_FAMILY},
        ],
    )
    def test_invalid_spec(self, kwargs: dict) -> None:
        """Test that out-of-range recipes raise ValueError."""
        with pytest.raises(ValueError):
            GenSpec(**kwargs)


class TestPlantedJordan:
    """Tests for planted Jordan structures."""

    def test_spectrum(self) -> None:
        """Test that the planted eigenvalues appear with their conjugates."""
        X = plant_jordan([(1j, 1), (2.0, 1)], seed=1)
        values = np.sort_complex(np.round(np.linalg.eigvals(X), 8))
        assert_allclose(values, np.sort_complex([-1j, 1j, 2.0, 2.0]), atol=1e-9)

    def test_result_is_quaternionic(self) -> None:
        """Test that the planted matrix is in the image of χ."""
        assert classify(plant_jordan([(1 + 1j, 2)], seed=2), tol=1e-9).quaternionic

    def test_rejects_bad_spread(self) -> None:
        """Test that spread must lie in [0, 1)."""
        with pytest.raises(ValueError):
            plant_jordan([(0.0, 1)], spread=1.0)

    def test_random_blocks_are_distinct(self) -> None:
        """Test that random blocks use distinct listed eigenvalues."""
        blocks = random_jordan_blocks(3)
        values = [lam for lam, _ in blocks]
        assert len(set(values)) == len(values)
        assert all(lam in JORDAN_EIGENVALUES for lam in values)


class TestResidualReport:
    """Tests for rendering checks."""

    def setup_method(self) -> None:
        """Create one passing and one failing check."""
        self.checks = [Check("X = UP", 1e-14, 1e-9), Check("U unitary", 1e-3, 1e-10)]

    def test_text(self) -> None:
        """Test the aligned table."""
        report = residual_report(self.checks, 1e-10)
        lines = report.splitlines()
        assert lines[0].startswith("check")
        assert lines[2].endswith("pass")
        assert lines[3].endswith("fail")
        assert lines[-1] == "overall: fail"

    def test_machine(self) -> None:
        """Test the key=value lines."""
        report = residual_report(self.checks, 1e-10, fmt="machine")
        assert "check.1.name=X = UP" in report
        assert "check.2.status=fail" in report
        assert report.splitlines()[-1] == "status=fail"

    def test_all_passing(self) -> None:
        """Test the overall status of passing checks."""
        assert residual_report(self.checks[:1], 1e-10).endswith("overall: pass")

    def test_unknown_format(self) -> None:
        """Test that an unknown format raises ValueError."""
        with pytest.raises(ValueError):
            residual_report(self.checks, 1e-10, fmt="json")
