"""The twelve acceptance criteria, one test each.

Every criterion prints a ``[PASS]``/``[FAIL]`` line; the lines are repeated
in the terminal summary by ``conftest.py``.
"""
import pytest

from subordlab import certify

ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.mark.parametrize("check", certify.CRITERIA, ids=lambda c: c.__name__)
def test_acceptance_criterion(check):
    result = check()
    ACCEPTANCE_LINES.append((result.number, result.line()))
    print(result.line())
    assert result.passed, result.detail
