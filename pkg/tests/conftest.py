import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qstft.corpus import complex_normal, rng_for
from qstft.dstft import make_context

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")


@st.composite
def contexts(draw, max_order=24):
    """A (G, H) pair: 1-3 cyclic factors, order at most ``max_order``, 0-2 generators."""
    rank = draw(st.integers(1, 3))
    factors = []
    for _ in range(rank):
        room = max_order // max(1, math.prod(factors))
        if room < 1:
            break
        factors.append(draw(st.integers(1, min(6, room))))
    ngen = draw(st.integers(0, 2))
    gens = [tuple(draw(st.integers(0, n - 1)) for n in factors) for _ in range(ngen)]
    return make_context(factors, gens)


seeds = st.integers(0, 2**32 - 1)


def cvec(seed, shape):
    return complex_normal(np.random.default_rng(seed), shape)


@pytest.fixture
def z4():
    return make_context([4], [(2,)])


@pytest.fixture
def rng():
    return rng_for(0, "tests", 0, 0)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
