import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscord.entropy import von_neumann_entropy
from qdiscord.linalg import DensityMatrix, InvalidStateError, partial_trace, validate_density
from qdiscord.states import (
    BlochCorrelation,
    StateFileError,
    StateSpec,
    bell_diagonal,
    format_complex,
    load_state,
    max_entangled,
    parse_complex,
    random_bloch_correlation,
    random_mixed,
    random_pure,
    save_state,
    uv_correlation,
    uv_entangled,
    uv_state,
    werner,
)

from .conftest import mixed_states


def singlet():
    psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    return np.outer(psi, psi)


def test_bell_diagonal_examples():
    np.testing.assert_allclose(bell_diagonal((0, 0, 0)).matrix, np.eye(4) / 4)
    s = bell_diagonal((-1, -1, -1))
    np.testing.assert_allclose(np.linalg.eigvalsh(s.matrix), [0, 0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(s.matrix, singlet(), atol=1e-15)
    with pytest.raises(InvalidStateError):
        BlochCorrelation(1, 1, 1)


@given(st.integers(0, 2**31))
@settings(max_examples=30)
def test_bell_diagonal_marginals_are_maximally_mixed(seed):
    rho = bell_diagonal(random_bloch_correlation(seed))
    validate_density(rho.matrix)
    for side in "XY":
        np.testing.assert_allclose(partial_trace(rho, side), np.eye(2) / 2, atol=1e-15)


def test_werner_examples():
    np.testing.assert_allclose(werner(0).matrix, np.eye(4) / 4)
    np.testing.assert_allclose(werner(1).matrix, singlet(), atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(werner(0.5).matrix), [0.125] * 3 + [0.625], atol=1e-15)
    for v in (1.2, -0.1):
        with pytest.raises(InvalidStateError):
            werner(v)


def test_families_match_pauli_sums():
    pauli = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    def direct(c):
        return (np.eye(4) + sum(ci * np.kron(p, p) for ci, p in zip(c, pauli))) / 4
    for v in (0, 0.3, 1):
        np.testing.assert_allclose(werner(v).matrix, direct([-v] * 3), atol=1e-15)
    u, v = 1 / 3, 0.8
    np.testing.assert_allclose(uv_state(u, v).matrix, direct([u, v, (u - v) / 2]), atol=1e-15)


def test_uv_family():
    np.testing.assert_allclose(uv_state(0, 0).matrix, np.eye(4) / 4)
    uv_state(1 / 3, 1.0)
    assert uv_entangled(1 / 3, 0.9)
    assert not uv_entangled(1 / 3, 0.5)
    assert uv_correlation(1 / 3, 1.0).c_max == pytest.approx(1.0)


def test_max_entangled():
    np.testing.assert_allclose(max_entangled(2).matrix, np.outer([1, 0, 0, 1], [1, 0, 0, 1]) / 2)
    m3 = max_entangled(3)
    assert np.trace(m3.matrix @ m3.matrix).real == pytest.approx(1, abs=1e-14)
    np.testing.assert_allclose(partial_trace(m3, "X"), np.eye(3) / 3, atol=1e-15)
    assert von_neumann_entropy(partial_trace(max_entangled(2), "X")) == pytest.approx(math.log(2))


def test_random_states_are_seeded():
    np.testing.assert_array_equal(random_pure(2, 3, 7).matrix, random_pure(2, 3, 7).matrix)
    np.testing.assert_array_equal(random_mixed(3, 3, 4, 7).matrix, random_mixed(3, 3, 4, 7).matrix)
    r1 = random_mixed(2, 2, 1, 8)
    assert np.trace(r1.matrix @ r1.matrix).real == pytest.approx(1, abs=1e-12)


@given(mixed_states())
@settings(max_examples=30, deadline=None)
def test_constructor_outputs_are_valid(rho):
    validate_density(rho.matrix)
    assert np.linalg.matrix_rank(rho.matrix, tol=1e-10) <= rho.dim


def test_state_spec_grammar():
    s = StateSpec.parse("uv:u=1/3,v=0.8")
    assert s.parameters == {"u": 1 / 3, "v": 0.8}
    assert StateSpec.parse("file:/tmp/x.qdm").path == "/tmp/x.qdm"
    with pytest.raises(ValueError, match="unknown state kind"):
        StateSpec.parse("ghz:n=3")
    with pytest.raises(ValueError, match="missing"):
        StateSpec.parse("werner:")
    with pytest.raises(ValueError, match="key=value"):
        StateSpec.parse("werner:0.5")
    assert StateSpec.parse("mixed-random:dimX=2,dimY=3,seed=1,rank=2").build().dim == 6


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e300))
def test_complex_round_trip(z):
    assert parse_complex(format_complex(z)) == z


def test_qdm_round_trip(tmp_path):
    path = tmp_path / "mixed.qdm"
    np.testing.assert_array_equal(_round(np.eye(4) / 4, 2, 2, path), np.eye(4) / 4)
    rho = random_mixed(2, 3, seed=12)
    save_state(rho, path)
    back = load_state(path)
    assert (back.dim_x, back.dim_y) == (2, 3)
    np.testing.assert_array_equal(back.matrix, rho.matrix)


def _round(m, dx, dy, path):
    save_state(DensityMatrix(m, dx, dy), path)
    return load_state(path).matrix


def _write(tmp_path, text):
    p = tmp_path / "bad.qdm"
    p.write_text(text)
    return p


def test_qdm_diagnostics(tmp_path):
    with pytest.raises(StateFileError, match="trace violation"):
        load_state(_write(tmp_path, "QDM 1 2 1\n0.45+0i 0+0i\n0+0i 0.45+0i\n"))
    with pytest.raises(StateFileError, match=r"not Hermitian: entry \(0,1\)") as err:
        load_state(_write(tmp_path, "# comment\nQDM 1 2 1\n0.5+0i 0+1e-6i\n0+0i 0.5+0i\n"))
    assert err.value.line == 3
    with pytest.raises(StateFileError, match="malformed header"):
        load_state(_write(tmp_path, "QDM 2 2 1\n"))
    with pytest.raises(StateFileError, match="expected 2 entries"):
        load_state(_write(tmp_path, "QDM 1 2 1\n1+0i\n0+0i 0+0i\n"))
    with pytest.raises(StateFileError, match="expected 2 rows"):
        load_state(_write(tmp_path, "QDM 1 2 1\n1+0i 0+0i\n"))
    with pytest.raises(StateFileError, match="positive semidefinite"):
        load_state(_write(tmp_path, "QDM 1 2 1\n1.5+0i 0+0i\n0+0i -0.5+0i\n"))
