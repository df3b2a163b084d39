"""One test per acceptance criterion; each prints its pass/fail line."""
import pytest

import conftest
from phi4waves.acceptance import CRITERIA


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion_{c.number:02d}")
def test_criterion(criterion):
    result = criterion()
    line = result.line()
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert result.passed, line
