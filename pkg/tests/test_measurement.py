import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscord.linalg import partial_trace
from qdiscord.measurement import (
    MeasurementBasis,
    computational_basis,
    conditional_ensemble,
    eigenbasis,
    general_basis,
    joint_channel,
    measure_channel,
    n_basis_params,
    qubit_basis,
)
from qdiscord.states import max_entangled, product_state, random_mixed

from .conftest import mixed_states

angles = st.floats(0, 2 * np.pi, allow_nan=False)


def test_qubit_basis_examples():
    np.testing.assert_allclose(qubit_basis(0, 0).projectors, [np.diag([1, 0]), np.diag([0, 1])], atol=1e-15)
    plus = np.array([1, 1]) / np.sqrt(2)
    np.testing.assert_allclose(qubit_basis(np.pi / 2, 0).projectors[0], np.outer(plus, plus), atol=1e-15)


@given(angles, angles)
def test_qubit_basis_is_complete(theta, phi):
    p = qubit_basis(theta, phi).projectors
    np.testing.assert_allclose(p.sum(0), np.eye(2), atol=1e-14)
    np.testing.assert_allclose(p[0] @ p[1], 0, atol=1e-14)
    for q in p:
        np.testing.assert_allclose(q @ q, q, atol=1e-14)


def test_general_basis(rng):
    np.testing.assert_allclose(general_basis([], 3).vectors, np.eye(3))
    np.testing.assert_allclose(general_basis(np.zeros(6), 3).vectors, np.eye(3), atol=1e-15)
    b = general_basis(rng.uniform(0, 2 * np.pi, n_basis_params(3)), 3)
    np.testing.assert_allclose(b.projectors.sum(0), np.eye(3), atol=1e-12)


@given(mixed_states(), st.permutations(range(3)), st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_channel_depends_only_on_basis_set(rho, perm, seed):
    b = general_basis(np.random.default_rng(seed).uniform(0, 6, n_basis_params(rho.dim_y)), rho.dim_y)
    perm = [p for p in perm if p < rho.dim_y]
    np.testing.assert_allclose(measure_channel(rho, b).matrix, measure_channel(rho, b.permuted(perm)).matrix, atol=1e-14)


def test_channel_examples():
    rx, ry = random_mixed(2, 1, seed=1).matrix, random_mixed(3, 1, seed=2).matrix
    rho = product_state(rx, ry)
    np.testing.assert_allclose(measure_channel(rho, eigenbasis(ry)).matrix, rho.matrix, atol=1e-14)
    want = np.zeros((4, 4))
    want[0, 0] = want[3, 3] = 0.5
    np.testing.assert_allclose(measure_channel(max_entangled(2), computational_basis(2)).matrix, want, atol=1e-15)
    joint = joint_channel(max_entangled(2), computational_basis(2), computational_basis(2))
    np.testing.assert_allclose(joint.matrix, want, atol=1e-15)


@given(mixed_states(), st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_channel_and_ensemble_invariants(rho, seed):
    b = general_basis(np.random.default_rng(seed).uniform(0, 6, n_basis_params(rho.dim_y)), rho.dim_y)
    post = measure_channel(rho, b)
    assert abs(np.trace(post.matrix) - 1) < 1e-13
    ens = conditional_ensemble(rho, b)
    np.testing.assert_allclose(ens.average(), partial_trace(rho, "Y"), atol=1e-10)
    # the X side orientation measures the other factor
    flipped = measure_channel(rho.swapped(), b, side="X") if rho.dim_x == rho.dim_y else None
    if flipped is not None:
        np.testing.assert_allclose(flipped.swapped().matrix, post.matrix, atol=1e-14)


def test_conditional_examples():
    rx, ry = random_mixed(2, 1, seed=3).matrix, random_mixed(2, 1, seed=4).matrix
    ens = conditional_ensemble(product_state(rx, ry), qubit_basis(0.3, 1.0))
    for c in ens.conditionals:
        np.testing.assert_allclose(c.matrix, rx, atol=1e-12)
    ens = conditional_ensemble(max_entangled(2), computational_basis(2))
    np.testing.assert_allclose(ens.probabilities, [0.5, 0.5])
    np.testing.assert_allclose(ens.conditionals[0].matrix, np.diag([1, 0]), atol=1e-15)
    np.testing.assert_allclose(ens.conditionals[1].matrix, np.diag([0, 1]), atol=1e-15)


def test_joint_channel_commutes_with_product_projectors(rng):
    rho = random_mixed(2, 3, seed=9)
    bx = MeasurementBasis(np.linalg.qr(rng.normal(size=(2, 2)))[0])
    by = general_basis(rng.uniform(0, 6, 6), 3)
    out = joint_channel(rho, bx, by).matrix
    for px in bx.projectors:
        for py in by.projectors:
            p = np.kron(px, py)
            np.testing.assert_allclose(p @ out, out @ p, atol=1e-14)
