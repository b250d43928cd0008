import pytest

from reslie.abelian import cyclic_algebra
from reslie.field import FiniteField
from reslie.liealg import AlgebraPresentation
from reslie.workbench.catalog import heisenberg, line, load_catalog

F2 = FiniteField(2)
F3 = FiniteField(3)
F4 = FiniteField(2, 2, (1, 1, 1))
U = 2  # the class of u in F_4 = F_2[u]/(u^2+u+1)


def chain(F, length):
    """Abelian x1 -> x2 -> ... -> 0 under the p-map."""
    n = length
    pmap = [tuple(1 if r == i + 1 else 0 for r in range(n)) for i in range(n)]
    return AlgebraPresentation(F, n, {}, pmap, tuple(f"x{i + 1}" for i in range(n)))


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture
def heis2():
    return heisenberg(F2)


@pytest.fixture
def heis3():
    return heisenberg(F3)


__all__ = ["F2", "F3", "F4", "U", "chain", "cyclic_algebra", "heisenberg", "line"]


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
