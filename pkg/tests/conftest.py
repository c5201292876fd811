import sys

import pytest

from diagkit.diagset import Presentation

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


def small_presentation() -> Presentation:
    """Points a, b, c; f, g: a -> b; h: b -> c; al, ga: f => g; m: al =>> ga."""
    P = Presentation()
    for p in "abc":
        P.add(p)
    P.add("f", P.cell("a"), P.cell("b"))
    P.add("g", P.cell("a"), P.cell("b"))
    P.add("h", P.cell("b"), P.cell("c"))
    P.add("al", P.cell("f"), P.cell("g"))
    P.add("ga", P.cell("f"), P.cell("g"))
    P.add("m", P.cell("al"), P.cell("ga"))
    return P


@pytest.fixture
def pres():
    return small_presentation()


@pytest.fixture
def C(pres):
    return pres.cell


def pytest_terminal_summary(terminalreporter):
    # the acceptance suite records one PASS/FAIL line per criterion
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
