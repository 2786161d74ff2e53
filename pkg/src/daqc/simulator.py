"""Dense unitary evaluation of Hamiltonians and schedules.

Operator-ordering convention: a schedule is applied left to right in time, so
its unitary is ``U_K ... U_2 U_1``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .hamiltonian import DENSE_CAP, PAULI, TwoBodyHamiltonian, dense_matrix
from .signmatrix import check_selection, conjugation_sign, pair_index

EXACT = "exact"
PAIRWISE_TROTTER = "pairwise_trotter"
MODES = (EXACT, PAIRWISE_TROTTER)


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown simulation mode {mode!r}; expected one of {MODES}")
    return mode


def expm_hermitian(A: np.ndarray, t: float) -> np.ndarray:
    """``exp(-i t A)`` for Hermitian ``A`` via eigendecomposition."""
    if not np.allclose(A, A.conj().T, atol=1e-12):
        raise ValueError("matrix is not Hermitian")
    w, V = np.linalg.eigh(A)
    return (V * np.exp(-1j * t * w)) @ V.conj().T


def evolve(H: TwoBodyHamiltonian, t: float, cap: int = DENSE_CAP) -> np.ndarray:
    """Exact propagator ``exp(-i t H)``."""
    return expm_hermitian(dense_matrix(H, cap=cap), t)


def apply_two_qubit(U: np.ndarray, gate: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """Left-multiply ``U`` by a 4x4 ``gate`` acting on qubits ``i < j`` (1-based).

    Works on the ``(2,)*n`` tensor view, so the identity on the other qubits
    is never formed.
    """
    dim = 2 ** n
    T = U.reshape((2,) * n + (-1,))
    G = gate.reshape(2, 2, 2, 2)
    T = np.tensordot(G, T, axes=([2, 3], [i - 1, j - 1]))
    # tensordot puts the gate's output legs first; move them back to i, j
    T = np.moveaxis(T, [0, 1], [i - 1, j - 1])
    return T.reshape(dim, -1)


def pair_hamiltonian(H: TwoBodyHamiltonian, i: int, j: int) -> np.ndarray:
    """4x4 Hamiltonian of the couplings between qubits ``i`` and ``j``."""
    out = np.zeros((4, 4), dtype=complex)
    for mu, nu in itertools.product("xyz", repeat=2):
        s = H.strength(i, j, mu, nu)
        if s:
            out += s * np.kron(PAULI[mu.upper()], PAULI[nu.upper()])
    return out


def evolve_pairwise_trotter(H: TwoBodyHamiltonian, t: float, cap: int = DENSE_CAP) -> np.ndarray:
    """First-order product of pair propagators, ``F_1 F_2 ... F_N`` in ascending pair index.

    Each ``F_b = exp(-i t H_{i,j})`` is exponentiated on its 4-dimensional
    pair space and applied through :func:`apply_two_qubit`.
    """
    n = H.n
    if n > cap:
        raise ValueError(f"n = {n} exceeds dense cap {cap}")
    pairs = sorted({(i, j) for (i, j, _, _) in H.couplings}, key=lambda p: pair_index(*p, n))
    U = np.eye(2 ** n, dtype=complex)
    # F_1 F_2 ... F_N: apply the last factor first
    for i, j in reversed(pairs):
        U = apply_two_qubit(U, expm_hermitian(pair_hamiltonian(H, i, j), t), i, j, n)
    return U


def propagator(H: TwoBodyHamiltonian, t: float, mode: str = EXACT) -> np.ndarray:
    if _check_mode(mode) == EXACT:
        return evolve(H, t)
    return evolve_pairwise_trotter(H, t)


def conjugate_by_gates(H: TwoBodyHamiltonian, sel: str) -> TwoBodyHamiltonian:
    """``G H G`` for the Pauli layer ``sel``: every coupling picks up its sign."""
    check_selection(sel, H.n)
    return TwoBodyHamiltonian(H.n, {
        (i, j, mu, nu): s * conjugation_sign(sel[i - 1], mu) * conjugation_sign(sel[j - 1], nu)
        for (i, j, mu, nu), s in H.couplings.items()
    })


def gate_layer_unitary(sel: str) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for g in sel:
        out = np.kron(out, PAULI[g])
    return out


def run_schedule(schedule, mode: str = EXACT, cap: int = DENSE_CAP) -> np.ndarray:
    """Unitary of ``schedule`` repeated ``trotter_steps`` times with durations ``t_k / n_T``."""
    _check_mode(mode)
    n = schedule.n
    if n > cap:
        raise ValueError(f"n = {n} exceeds dense cap {cap}")
    if any(b.duration < 0 for b in schedule.blocks):
        raise ValueError("schedule contains negative durations")
    n_T = schedule.trotter_steps
    step = np.eye(2 ** n, dtype=complex)
    if mode == EXACT and schedule.blocks:
        # G exp(-i t H) G = exp(-i t G H G): one eigendecomposition serves every block
        w, V = np.linalg.eigh(dense_matrix(schedule.source, cap=cap))
        for block in schedule.blocks:
            U = (V * np.exp(-1j * (block.duration / n_T) * w)) @ V.conj().T
            if set(block.sandwich) != {"I"}:
                G = gate_layer_unitary(block.sandwich)
                U = G @ U @ G
            step = U @ step
    else:
        for block in schedule.blocks:
            Hk = conjugate_by_gates(schedule.source, block.sandwich)
            step = evolve_pairwise_trotter(Hk, block.duration / n_T) @ step
    return np.linalg.matrix_power(step, n_T)


def frobenius_distance(U: np.ndarray, V: np.ndarray) -> float:
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape != V.shape:
        raise ValueError(f"dimension mismatch: {U.shape} vs {V.shape}")
    return float(np.linalg.norm(U - V))


def unitarity_error(U: np.ndarray) -> float:
    """``||U U^dagger - I||`` (Frobenius)."""
    U = np.asarray(U)
    return float(np.linalg.norm(U @ U.conj().T - np.eye(U.shape[0])))
