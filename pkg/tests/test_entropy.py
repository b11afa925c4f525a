import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscord.entropy import (
    EntropicIndex,
    information,
    linear_entropy,
    max_entropy,
    tsallis_entropy,
    von_neumann_entropy,
)
from qdiscord.states import max_entangled, random_mixed, werner

from .conftest import mixed_states


def test_examples():
    psi = max_entangled(2)
    for q in (0.3, 1, 2, 7):
        assert abs(tsallis_entropy(psi, q)) < 1e-12
    assert tsallis_entropy(np.eye(2) / 2, 2) == pytest.approx(0.5, abs=1e-15)
    want = -(0.25 * math.log(0.25) + 0.75 * math.log(0.75))
    assert tsallis_entropy(np.diag([0.25, 0.75]), 1) == pytest.approx(want, abs=1e-15)
    assert want == pytest.approx(0.5623, abs=1e-4)


def test_linear_entropy():
    assert linear_entropy(max_entangled(2)) == pytest.approx(0, abs=1e-12)
    assert linear_entropy(np.eye(4) / 4) == pytest.approx(0.75)
    rho = random_mixed(2, 2, seed=3)
    assert linear_entropy(rho) == pytest.approx(1 - np.sum(np.linalg.eigvalsh(rho.matrix) ** 2), abs=1e-14)


def test_information_examples():
    for q in (0.5, 1, 3):
        assert abs(information(np.eye(4) / 4, q)) < 1e-14
    assert information(max_entangled(2), 1) == pytest.approx(math.log(4))
    w = np.linalg.eigvalsh(werner(0.5).matrix)
    assert information(werner(0.5), 2) == pytest.approx(1 - 1 / 4 - (1 - np.sum(w**2)), abs=1e-14)


def test_invalid_index():
    for q in (0, -1, math.nan):
        with pytest.raises(ValueError):
            EntropicIndex(q)


def test_q_one_branch_is_continuous():
    rho = random_mixed(2, 3, seed=11)
    s1 = von_neumann_entropy(rho)
    assert tsallis_entropy(rho, 1 + 1e-7) == s1
    assert tsallis_entropy(rho, 1 + 2e-6) == pytest.approx(s1, abs=1e-5)


@given(mixed_states(), st.sampled_from([0.2, 0.5, 1, 1.5, 2, 3, 10]))
@settings(max_examples=60, deadline=None)
def test_entropy_bounds(rho, q):
    s = tsallis_entropy(rho, q)
    assert s >= -1e-12
    assert s <= max_entropy(rho.dim, q) + 1e-12
