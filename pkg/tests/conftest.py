import pytest

from qpsurf.algebra import Alphabet
from qpsurf.surface import QuasiSurface

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def X2():
    """Two gates, two y-generators."""
    return QuasiSurface(2, 2)


@pytest.fixture
def alpha():
    return Alphabet(2, 3)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
