from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from oagwlp import Fraction, read_oa_file

DATA = Path(__file__).parent / "data"


def load(name):
    return read_oa_file(DATA / name)


@pytest.fixture(scope="session")
def oa12():
    return load("oa12_2_5.txt")


@pytest.fixture(scope="session")
def pb12():
    return load("pb12_2_11.txt")


@pytest.fixture(scope="session")
def oa18():
    return load("oa18_2_3x3.txt")


@pytest.fixture(scope="session")
def oa16():
    return load("oa16_2x4_4x2.txt")


def random_fraction(rng, max_m=5, levels=(2, 3, 4), max_n=16, max_mult=2):
    """Random multiset fraction; some points are replicated up to ``max_mult`` times."""
    m = int(rng.integers(1, max_m + 1))
    lv = [int(rng.choice(levels)) for _ in range(m)]
    rows = []
    target = int(rng.integers(1, max_n + 1))
    while len(rows) < target:
        row = [int(rng.integers(s)) for s in lv]
        rows.extend([row] * min(int(rng.integers(1, max_mult + 1)), target - len(rows)))
    rng.shuffle(rows)
    return Fraction.from_codes(lv, rows)


@st.composite
def fractions(draw, max_m=4, levels=(2, 3, 4), max_n=10):
    m = draw(st.integers(1, max_m))
    lv = draw(st.lists(st.sampled_from(levels), min_size=m, max_size=m))
    rows = draw(
        st.lists(st.tuples(*(st.integers(0, s - 1) for s in lv)), min_size=1, max_size=max_n)
    )
    return Fraction.from_codes(lv, rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0][2:])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")
