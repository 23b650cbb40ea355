import numpy as np
import pytest
from hypothesis import strategies as st

from hiersumm import DimensionTree, ProductSpace, WeightMap


def abc(i):
    return DimensionTree.star(f"r{i}", [f"a{i}", f"b{i}"])


@pytest.fixture
def fig1():
    """Two trees r_i -> (a_i, b_i)."""
    return ProductSpace([abc(1), abc(2)])


@pytest.fixture
def fig3d():
    return ProductSpace([abc(1), abc(2), abc(3)])


@st.composite
def trees(draw, max_size=6, min_size=1):
    size = draw(st.integers(min_size, max_size))
    parents = [None] + [draw(st.integers(0, i - 1)) for i in range(1, size)]
    return DimensionTree(parents)


@st.composite
def spaces(draw, max_d=3, max_size=4):
    d = draw(st.integers(1, max_d))
    return ProductSpace([draw(trees(max_size)) for _ in range(d)])


@st.composite
def weighted_spaces(draw, max_d=3, max_size=4, max_weighted=8):
    space = draw(spaces(max_d, max_size))
    nodes = list(space.nodes())
    picked = draw(st.lists(st.sampled_from(nodes), max_size=max_weighted, unique=True))
    weights = {v: float(draw(st.integers(1, 20))) for v in picked}
    return space, WeightMap.from_dict(space, weights)


def random_weight_map(space, rng, density=0.5, max_value=20):
    weights = {v: float(rng.integers(1, max_value + 1)) for v in space.nodes() if rng.random() < density}
    return WeightMap.from_dict(space, weights)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
