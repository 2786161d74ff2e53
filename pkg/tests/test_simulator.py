import math

import numpy as np
import pytest
from scipy.linalg import expm

from daqc.hamiltonian import TwoBodyHamiltonian, dense_matrix, random_hamiltonian, xy_chain
from daqc.scheduler import AnalogBlock, Schedule
from daqc.simulator import (
    apply_two_qubit,
    conjugate_by_gates,
    evolve,
    evolve_pairwise_trotter,
    expm_hermitian,
    frobenius_distance,
    gate_layer_unitary,
    propagator,
    run_schedule,
    unitarity_error,
)

ZZ = TwoBodyHamiltonian(2, {(1, 2, "z", "z"): 1.0})


def test_evolve_zero_time():
    assert np.allclose(evolve(xy_chain(3), 0.0), np.eye(8))


def test_evolve_zz_pi():
    assert np.allclose(evolve(ZZ, math.pi), -np.eye(4), atol=1e-12)


def test_evolve_matches_scipy_expm():
    H = random_hamiltonian(3, np.random.default_rng(2))
    assert np.allclose(evolve(H, 0.37), expm(-0.37j * dense_matrix(H)), atol=1e-12)


def test_evolve_group_law():
    rng = np.random.default_rng(4)
    for _ in range(5):
        H = random_hamiltonian(3, rng)
        a, b = rng.uniform(-1, 1, 2)
        assert np.allclose(evolve(H, a) @ evolve(H, b), evolve(H, a + b), atol=1e-9)


def test_expm_rejects_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        expm_hermitian(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)


def test_apply_two_qubit_matches_kron():
    rng = np.random.default_rng(0)
    G = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0]
    n = 4
    U = np.eye(2 ** n, dtype=complex)
    # gate on qubits (2, 4): build with an explicit swap of qubits 3 and 4
    full = np.kron(np.kron(np.eye(2), G), np.eye(2))
    swap = np.zeros((16, 16))
    for k in range(16):
        bits = [(k >> (3 - q)) & 1 for q in range(4)]
        bits[2], bits[3] = bits[3], bits[2]
        swap[sum(b << (3 - q) for q, b in enumerate(bits)), k] = 1
    assert np.allclose(apply_two_qubit(U, G, 2, 4, n), swap @ full @ swap)


def test_pairwise_single_pair_is_exact():
    H = TwoBodyHamiltonian(3, {(1, 3, "x", "y"): 0.7, (1, 3, "z", "z"): -0.4})
    assert frobenius_distance(evolve_pairwise_trotter(H, 1.3), evolve(H, 1.3)) < 1e-12


def test_pairwise_zero_time():
    assert np.allclose(evolve_pairwise_trotter(xy_chain(3), 0.0), np.eye(8))


def test_pairwise_small_time():
    assert frobenius_distance(evolve_pairwise_trotter(xy_chain(3), 0.01), evolve(xy_chain(3), 0.01)) <= 1e-3


def test_pairwise_order_is_ascending_pair_index():
    H = random_hamiltonian(3, np.random.default_rng(8))
    t = 0.3
    factors = {}
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        sub = TwoBodyHamiltonian(3, {k: v for k, v in H.couplings.items() if k[:2] == (i, j)})
        factors[(i, j)] = evolve(sub, t)
    oracle = factors[(1, 2)] @ factors[(1, 3)] @ factors[(2, 3)]
    assert np.allclose(evolve_pairwise_trotter(H, t), oracle, atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_pairwise_error_quadratic(seed):
    H = random_hamiltonian(3, np.random.default_rng(seed))
    d = [frobenius_distance(evolve_pairwise_trotter(H, t), evolve(H, t)) for t in (0.02, 0.01)]
    assert 3 <= d[0] / d[1] <= 5


def test_propagator_modes():
    H = xy_chain(3)
    assert np.allclose(propagator(H, 0.2, "exact"), evolve(H, 0.2))
    assert np.allclose(propagator(H, 0.2, "pairwise_trotter"), evolve_pairwise_trotter(H, 0.2))
    with pytest.raises(ValueError):
        propagator(H, 0.2, "magic")


def test_conjugate_examples():
    H = ZZ
    assert conjugate_by_gates(H, "II") == H
    assert conjugate_by_gates(H, "XX").strength(1, 2, "z", "z") == 1.0
    assert conjugate_by_gates(H, "XI").strength(1, 2, "z", "z") == -1.0


def test_conjugate_matches_dense():
    rng = np.random.default_rng(6)
    for n in (2, 3, 4):
        H = random_hamiltonian(n, rng)
        for _ in range(5):
            sel = "".join(rng.choice(list("IXYZ"), n))
            G = gate_layer_unitary(sel)
            assert np.allclose(dense_matrix(conjugate_by_gates(H, sel)), G.conj().T @ dense_matrix(H) @ G)


def test_run_schedule_empty():
    s = Schedule(3, xy_chain(3), (), 1, 1.0)
    assert np.allclose(run_schedule(s), np.eye(8))


def test_run_schedule_order_oracle():
    H = random_hamiltonian(2, np.random.default_rng(1))
    blocks = (AnalogBlock(0.3, "XI"), AnalogBlock(0.5, "IY"), AnalogBlock(0.2, "ZZ"))
    s = Schedule(2, H, blocks, 2, 1.0)
    step = np.eye(4)
    for b in blocks:
        G = gate_layer_unitary(b.sandwich)
        step = G @ expm(-1j * b.duration / 2 * dense_matrix(H)) @ G @ step
    assert np.allclose(run_schedule(s), step @ step, atol=1e-12)
    assert np.allclose(run_schedule(s, "pairwise_trotter"), step @ step, atol=1e-12)


def test_run_schedule_rejects_negative():
    s = Schedule(2, ZZ, (AnalogBlock(-0.1, "II"),), 1, 1.0)
    with pytest.raises(ValueError, match="negative"):
        run_schedule(s)


def test_frobenius_distance():
    assert frobenius_distance(np.eye(4), np.eye(4)) == 0
    assert frobenius_distance(np.eye(64), -np.eye(64)) == pytest.approx(16.0)
    with pytest.raises(ValueError, match="mismatch"):
        frobenius_distance(np.eye(2), np.eye(4))


def test_unitarity():
    H = random_hamiltonian(4, np.random.default_rng(0))
    assert unitarity_error(evolve(H, 2.0)) < 1e-12
    assert unitarity_error(evolve_pairwise_trotter(H, 2.0)) < 1e-12
