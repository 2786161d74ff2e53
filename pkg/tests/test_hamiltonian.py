import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from daqc.exceptions import UnsimulableError
from daqc.hamiltonian import (
    TwoBodyHamiltonian,
    all_keys,
    cross_resonance_chain,
    dense_matrix,
    format_hamiltonian,
    frobenius_norm,
    hamiltonian_digest,
    hamiltonian_norm,
    parse_hamiltonian,
    random_hamiltonian,
    ratio_vector,
    xy_chain,
    zz_all_to_all,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0 + 0j, -1.0])


def _doc(n, recs):
    return json.dumps({"n": n, "couplings": [dict(zip(("i", "j", "mu", "nu", "strength"), r)) for r in recs]})


def test_parse_empty():
    H = parse_hamiltonian('{"n": 2, "couplings": []}')
    assert H.n == 2 and len(H) == 0


def test_parse_xy_chain():
    text = _doc(3, [(1, 2, "x", "x", 1), (1, 2, "y", "y", 1), (2, 3, "x", "x", 1), (2, 3, "y", "y", 1)])
    H = parse_hamiltonian(text)
    assert dict(H.couplings) == {
        (1, 2, "x", "x"): 1.0, (1, 2, "y", "y"): 1.0, (2, 3, "x", "x"): 1.0, (2, 3, "y", "y"): 1.0}
    assert H == xy_chain(3, 1.0)


@pytest.mark.parametrize("recs, msg", [
    ([(3, 1, "x", "x", 1.0)], "non-canonical"),
    ([(1, 2, "x", "x", 1.0), (1, 2, "x", "x", 2.0)], "duplicate"),
    ([(1, 4, "x", "x", 1.0)], "out of range"),
    ([(0, 2, "x", "x", 1.0)], "out of range"),
    ([(1, 2, "w", "x", 1.0)], "axis"),
])
def test_parse_rejects(recs, msg):
    with pytest.raises(ValueError, match=msg):
        parse_hamiltonian(_doc(3, recs))


def test_parse_rejects_nonfinite_and_unknown_fields():
    with pytest.raises(ValueError):
        parse_hamiltonian('{"n": 2, "couplings": [{"i": 1, "j": 2, "mu": "x", "nu": "x", "strength": NaN}]}')
    with pytest.raises(ValueError, match="unknown header"):
        parse_hamiltonian('{"n": 2, "couplings": [], "T": 1}')
    with pytest.raises(ValueError, match="unknown coupling"):
        parse_hamiltonian('{"n": 2, "couplings": [{"i": 1, "j": 2, "mu": "x", "nu": "x", "strength": 1, "w": 0}]}')
    with pytest.raises(ValueError, match="missing"):
        parse_hamiltonian('{"n": 2, "couplings": [{"i": 1, "j": 2, "mu": "x", "strength": 1}]}')


def test_zero_strength_is_absent():
    H = parse_hamiltonian(_doc(2, [(1, 2, "x", "x", 0.0), (1, 2, "z", "z", 2.0)]))
    assert list(H.couplings) == [(1, 2, "z", "z")]
    assert H.strength(1, 2, "x", "x") == 0.0


def test_roundtrip_random():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4):
        H = random_hamiltonian(n, rng)
        text = format_hamiltonian(H)
        assert parse_hamiltonian(text) == H
        assert format_hamiltonian(parse_hamiltonian(text)) == text


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False).filter(lambda v: v != 0), min_size=3, max_size=3))
def test_roundtrip_exact_floats(vals):
    H = zz_all_to_all(3, vals)
    assert parse_hamiltonian(format_hamiltonian(H)) == H


def test_digest_depends_on_content():
    assert hamiltonian_digest(xy_chain(3)) == hamiltonian_digest(xy_chain(3))
    assert hamiltonian_digest(xy_chain(3)) != hamiltonian_digest(xy_chain(3, 2.0))


def test_dense_zero_and_zz():
    assert np.array_equal(dense_matrix(TwoBodyHamiltonian(2, {})), np.zeros((4, 4)))
    D = dense_matrix(TwoBodyHamiltonian(2, {(1, 2, "z", "z"): 1.0}))
    assert np.allclose(D, np.diag([1, -1, -1, 1]))


def test_dense_xx_plus_yy_oracle():
    D = dense_matrix(xy_chain(2, 1.0))
    expected = np.zeros((4, 4))
    expected[1, 2] = expected[2, 1] = 2  # 0-based entries (2,3), (3,2)
    assert np.allclose(D, expected)
    assert np.allclose(D, np.kron(X, X) + np.kron(Y, Y))


def test_qubit_one_is_leftmost():
    D = dense_matrix(TwoBodyHamiltonian(3, {(1, 2, "x", "z"): 1.0}))
    assert np.allclose(D, np.kron(np.kron(X, Z), np.eye(2)))


def test_dense_cap():
    with pytest.raises(ValueError, match="cap"):
        dense_matrix(xy_chain(4), cap=3)


def test_dense_linear():
    rng = np.random.default_rng(5)
    A, B = random_hamiltonian(3, rng), random_hamiltonian(3, rng)
    a, b = 0.7, -1.3
    assert np.allclose(dense_matrix(A.scaled(a) + B.scaled(b)), a * dense_matrix(A) + b * dense_matrix(B))


def test_frobenius_norm_values():
    assert frobenius_norm(np.zeros((3, 3))) == 0
    assert frobenius_norm(np.eye(64)) == pytest.approx(8.0)
    assert frobenius_norm(dense_matrix(xy_chain(2))) == pytest.approx(math.sqrt(8))


def test_norm_formula_matches_dense():
    rng = np.random.default_rng(9)
    for n in (2, 3, 4):
        H = random_hamiltonian(n, rng)
        s2 = sum(v * v for v in H.couplings.values())
        assert frobenius_norm(dense_matrix(H)) == pytest.approx(math.sqrt(2 ** n * s2), rel=1e-12)
        assert hamiltonian_norm(H) == pytest.approx(math.sqrt(2 ** n * s2), rel=1e-12)


def test_ratio_vector_identity():
    H = random_hamiltonian(3, np.random.default_rng(0))
    b = ratio_vector(H, H, 1.0)
    assert np.allclose(b.entries, 1.0)
    assert b.active_rows == tuple(range(1, 28))


def test_ratio_vector_unsimulable_xy_from_cross_resonance():
    with pytest.raises(UnsimulableError, match=r"\(1,2,x,x\)"):
        ratio_vector(xy_chain(3), cross_resonance_chain(3), 1.0)


def test_ratio_vector_arithmetic():
    g = TwoBodyHamiltonian(2, {(1, 2, "z", "z"): 2.0})
    h = TwoBodyHamiltonian(2, {(1, 2, "z", "z"): 4.0})
    b = ratio_vector(g, h, 3.0)
    assert b.entries.tolist() == [1.5] and b.active_rows == (9,)
    assert ratio_vector(g, h, 3.0, protocol="zz").active_rows == (1,)


def test_ratio_vector_drops_rows_with_zero_source():
    src = cross_resonance_chain(3)
    b = ratio_vector(TwoBodyHamiltonian(3, {}), src, 1.0)
    assert len(b) == 6 and np.all(b.entries == 0)


def test_all_keys_order():
    keys = list(all_keys(3))
    assert len(keys) == 27
    assert keys[0] == (1, 2, "x", "x") and keys[5] == (1, 2, "y", "z") and keys[-1] == (2, 3, "z", "z")


def test_cross_resonance_strength_layout():
    h = np.arange(1, 7, dtype=float).reshape(2, 3)
    H = cross_resonance_chain(3, h)
    assert H.strength(1, 2, "x", "z") == 1 and H.strength(1, 2, "z", "x") == 2
    assert H.strength(2, 3, "z", "z") == 6
