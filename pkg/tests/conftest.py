from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from gtakagi.decomposition import build_radix
from gtakagi.evaluation import GeneralizedTakagi, WeightSequence

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def unit_rationals(max_den=10 ** 4):
    """Rationals in [0, 1] with bounded denominators."""
    return st.integers(1, max_den).flatmap(
        lambda q: st.integers(0, q).map(lambda p: Fraction(p, q)))


@pytest.fixture(scope="session")
def takagi():
    return GeneralizedTakagi(build_radix(2, 64), WeightSequence.const(1))


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES[k] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
