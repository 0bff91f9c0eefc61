import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from borelk.laurent import LaurentPoly
from borelk.rootdata import generate_weyl, preset


def laurent_polys(rank: int, max_terms: int = 5, exp: int = 3, coeff: int = 9):
    mono = st.tuples(*[st.integers(-exp, exp)] * rank)
    return st.dictionaries(mono, st.integers(-coeff, coeff), max_size=max_terms).map(
        lambda d: LaurentPoly(rank, d))


def evaluate(p: LaurentPoly, point) -> Fraction:
    """Independent evaluation at a rational point with nonzero coordinates."""
    total = Fraction(0)
    for mono, c in p.items():
        term = Fraction(c)
        for x, a in zip(point, mono):
            term *= Fraction(x) ** a
        total += term
    return total


@pytest.fixture(scope="session")
def presets():
    return {name: preset(name) for name in ("SL2", "GL2", "SL3", "GL3", "Gm^1", "Gm^2")}


@pytest.fixture(scope="session")
def weyl(presets):
    return {name: generate_weyl(rd) for name, rd in presets.items()}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
