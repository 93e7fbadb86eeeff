"""Acceptance gate: one test and one printed PASS/FAIL line per criterion."""
import pytest

from lqcalc.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, record_criterion):
    result = CRITERIA[number]()
    record_criterion(result.line())
    assert result.passed, result.line()
