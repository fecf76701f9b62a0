import pytest

from ffdyn.funcfield import KField
from ffdyn.gf import GF
from ffdyn.ratmap import RatMap
from ffdyn.textio import parse_kpoly, parse_place, parse_point


@pytest.fixture
def F3():
    return GF(3)


@pytest.fixture
def K3():
    return KField(GF(3))


class Parser:
    """Short helpers bound to one constant field."""

    def __init__(self, F):
        self.F = F
        self.K = KField(F)

    def pt(self, s):
        return parse_point(self.F, s)

    def pl(self, s):
        return parse_place(self.F, s)

    def kp(self, s):
        return parse_kpoly(self.F, s)

    def map(self, s):
        return RatMap.parse(self.F, s)


@pytest.fixture
def P3():
    return Parser(GF(3))


@pytest.fixture
def P5():
    return Parser(GF(5))


@pytest.fixture
def P2():
    return Parser(GF(2))


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
