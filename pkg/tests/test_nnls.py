import numpy as np
import pytest
from scipy.optimize import linprog, nnls as scipy_nnls

from daqc.hamiltonian import random_hamiltonian, ratio_vector
from daqc.nnls import nnls
from daqc.signmatrix import pool_matrix


def test_trivial():
    x, r = nnls(np.eye(3), np.array([1.0, 2.0, 3.0]))
    assert x.tolist() == [1.0, 2.0, 3.0] and r == 0.0


def test_negative_target_clamps_to_zero():
    x, r = nnls(np.eye(2), np.array([-1.0, 2.0]))
    assert x.tolist() == [0.0, 2.0]
    assert r == pytest.approx(1.0)


def test_shape_check():
    with pytest.raises(ValueError):
        nnls(np.eye(3), np.ones(2))


@pytest.mark.parametrize("seed", range(20))
def test_matches_scipy_random(seed):
    rng = np.random.default_rng(seed)
    m, n = rng.integers(3, 25, size=2)
    A = rng.standard_normal((m, n))
    b = rng.standard_normal(m)
    x, r = nnls(A, b)
    xs, rs = scipy_nnls(A, b)
    assert np.all(x >= 0)
    assert r == pytest.approx(rs, rel=1e-8, abs=1e-10)
    # KKT: gradient is non-negative, and zero on the support
    w = A.T @ (b - A @ x)
    assert np.all(w <= 1e-8)
    assert np.allclose(w[x > 0], 0, atol=1e-8)


@pytest.mark.parametrize("n", [2, 3])
def test_pool_feasibility_against_linprog(n):
    # a feasible non-negative solution exists; NNLS must find a zero-residual one
    rng = np.random.default_rng(n)
    src, tgt = random_hamiltonian(n, rng), random_hamiltonian(n, rng)
    b = ratio_vector(tgt, src, 1.0).entries
    _, cols = pool_matrix(n)
    A = cols.astype(float)
    lp = linprog(np.ones(A.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert lp.status == 0
    x, r = nnls(A, b)
    assert r < 1e-10 and np.all(x >= 0)
    # linprog gives the least total time; NNLS cannot beat it
    assert x.sum() >= lp.fun - 1e-9
