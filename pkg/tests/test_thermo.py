import math

import numpy as np
import pytest

from qdiscord.entropy import tsallis_entropy, von_neumann_entropy
from qdiscord.states import max_entangled, product_state, random_mixed, werner, bell_diagonal
from qdiscord.discord import bell_diagonal_q_discord
from qdiscord.states import BlochCorrelation
from qdiscord.thermo import (
    ThermoContext,
    demon_excess_work,
    dimensionless_excess,
    extractable_work,
    two_sided_excess,
)

from .conftest import FAST


def test_extractable_work_examples():
    ctx = ThermoContext()
    from qdiscord.linalg import DensityMatrix
    assert abs(extractable_work(DensityMatrix(np.eye(4) / 4, 2, 2), ctx)) < 1e-15
    assert extractable_work(max_entangled(2), ctx) == pytest.approx(math.log(4))
    hot = ThermoContext(kT=2.0)
    assert extractable_work(werner(0.5), hot) == pytest.approx(2 * (math.log(4) - von_neumann_entropy(werner(0.5))))


def test_demon_excess_examples():
    rho = product_state(random_mixed(2, 1, seed=1).matrix, random_mixed(2, 1, seed=2).matrix)
    assert abs(demon_excess_work(rho, ThermoContext(), FAST).value) < 1e-9
    assert demon_excess_work(max_entangled(2), ThermoContext(), FAST).value == pytest.approx(math.log(2), abs=1e-8)


def test_demon_excess_is_two_sided_difference():
    for seed in range(4):
        rho = random_mixed(2, 2, seed=seed)
        for ctx in (ThermoContext(1.0, 1.0), ThermoContext(0.5, 1.5)):
            w = demon_excess_work(rho, ctx, FAST)
            assert w.value == ctx.kT * w.discord.value
            assert w.value == pytest.approx(two_sided_excess(rho, ctx, w.discord.optimal_basis), abs=1e-8)


def test_interpretation_flag():
    assert not demon_excess_work(max_entangled(2), ThermoContext(q=1.5), FAST).interpretation_warning
    assert demon_excess_work(max_entangled(2), ThermoContext(q=3.0), FAST).interpretation_warning
    with pytest.raises(ValueError):
        ThermoContext(kT=0)


def test_dimensionless_excess():
    rho = product_state(np.diag([0.3, 0.7]), np.diag([0.5, 0.5]))
    assert abs(dimensionless_excess(rho, FAST)) < 1e-9
    assert dimensionless_excess(max_entangled(2), FAST) == pytest.approx(math.log(2), abs=1e-8)
    vs = np.linspace(0, 1, 41)
    d1 = [bell_diagonal_q_discord(BlochCorrelation(-v, -v, -v), 1)[0] for v in vs]
    assert all(b > a for a, b in zip(d1, d1[1:]))
