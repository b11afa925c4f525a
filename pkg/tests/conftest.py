import numpy as np
import pytest
from hypothesis import strategies as st

from qdiscord.optimizer import SearchConfig
from qdiscord.states import random_mixed, random_pure

# lighter search for tests that minimise many times
FAST = SearchConfig(grid_resolution=32, seed_count=3)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3)])


@st.composite
def mixed_states(draw, dims=dims):
    dx, dy = draw(dims)
    rank = draw(st.integers(1, dx * dy))
    return random_mixed(dx, dy, rank, draw(seeds))


@st.composite
def pure_states(draw, dims=dims):
    dx, dy = draw(dims)
    return random_pure(dx, dy, draw(seeds))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def fast():
    return FAST
