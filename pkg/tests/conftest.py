from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import settings

from lqcalc.coeff import CoeffPoly

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SYMBOLS = ("a[1,2]", "a[1,3]", "a[2,3]")


@st.composite
def coeff_polys(draw, max_terms=4, with_params=True):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        qe = draw(st.integers(-3, 3))
        le = draw(st.integers(-2, 2))
        params = ()
        if with_params and draw(st.booleans()):
            params = ((draw(st.sampled_from(SYMBOLS)), draw(st.integers(1, 2))),)
        c = Fraction(draw(st.integers(-6, 6)), draw(st.integers(1, 4)))
        terms[(qe, le, params)] = terms.get((qe, le, params), 0) + c
    return CoeffPoly(terms)


nonzero_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda x: x != 0)


_CRITERION_LINES = []


@pytest.fixture
def record_criterion():
    def record(line):
        _CRITERION_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERION_LINES):
            terminalreporter.write_line(line)
