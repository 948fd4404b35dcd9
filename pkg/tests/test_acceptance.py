"""Acceptance sweeps on a handful of seeds."""

import importlib.util
from pathlib import Path

import pytest

_SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "run_acceptance.py"
_spec = importlib.util.spec_from_file_location("run_acceptance", _SCRIPT)
run_acceptance = importlib.util.module_from_spec(_spec)
_spec.loader.exec_module(run_acceptance)

TOL = 1e-10


class TestAcceptanceSweeps:
    """Every sweep passes on small seeded instances."""

    @pytest.mark.parametrize("name", list(run_acceptance.SWEEPS))
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_sweep(self, name: str, seed: int) -> None:
        """Test one sweep at N = 1 + seed."""
        checks = run_acceptance.SWEEPS[name](seed, 1 + seed, TOL)
        assert [check.name for check in checks if not check.passed] == []
