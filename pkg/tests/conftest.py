import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from packbound.model import Positioning, Rect, RectSet
from packbound.solver import SequencePair, decode


def random_rects(rng: random.Random, n: int, hi: int = 4, den: int = 1) -> RectSet:
    return RectSet(tuple(
        Rect(Fraction(rng.randint(1, hi * den), den), Fraction(rng.randint(1, hi * den), den))
        for _ in range(n)
    ))


def inject_gaps(rng: random.Random, pos: Positioning, count: int = 2) -> Positioning:
    """Open gaps by shifting everything at/after random cut lines (keeps validity)."""
    for _ in range(count):
        axis = rng.randint(0, 1)
        cuts = sorted({o[axis] for o in pos.origins})
        cut = rng.choice(cuts)
        g = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        pos = Positioning(pos.rects, tuple(
            (x + g, y) if axis == 0 and x >= cut else (x, y + g) if axis == 1 and y >= cut else (x, y)
            for x, y in pos.origins
        ))
    return pos


def random_positioning(rng: random.Random, n: int, hi: int = 4, den: int = 2, gaps: int = 2) -> Positioning:
    """Decoded random sequence pair, loosened with gaps and translated."""
    rects = random_rects(rng, n, hi, den)
    xs = list(range(n))
    ys = list(range(n))
    rng.shuffle(xs)
    rng.shuffle(ys)
    pos = decode(SequencePair(tuple(xs), tuple(ys)), rects)
    pos = inject_gaps(rng, pos, gaps)
    return pos.translated(Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 2))


@st.composite
def positionings(draw, max_n: int = 6):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    n = draw(st.integers(min_value=1, max_value=max_n))
    return random_positioning(random.Random(seed), n)


@pytest.fixture
def rng():
    return random.Random(20261016)


# criterion number -> (passed, summary line), filled by the acceptance module
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num][1])
