"""One test per acceptance criterion; each prints a PASS/FAIL line with its measurements.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines, or use
``tricount accept``.
"""

import pytest

from tricount.acceptance import CRITERIA


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    result = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
