"""Acceptance suite: one pass/fail line per criterion (run with ``pytest -s`` to see them)."""
import pytest

from qdbar.acceptance import CRITERIA, AcceptanceConfig, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number):
    res = run_criterion(number, AcceptanceConfig())
    print(res.line())
    assert res.passed, res.line()
