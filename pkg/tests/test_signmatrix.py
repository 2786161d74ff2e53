import itertools

import numpy as np
import pytest

from daqc import signmatrix as sm
from daqc.signmatrix import (
    M0, M2, M11, M12,
    build_protocol_matrix,
    build_protocol_matrix_recursive,
    column_for_selection,
    conjugation_sign,
    exact_rank,
    gate_pair_index,
    global_index,
    global_unindex,
    is_nonsingular,
    iter_pool,
    pair_index,
    pair_unindex,
    pool_matrix,
    protocol_layout,
    selection_columns,
    subblock,
    subblock_kind_for,
    zz_matrix,
)

# block layouts as printed for M(3), M(4), M(5)
_S = {"2": "M2", "a": "M11", "b": "M12", "0": "M0"}
PRINTED = {
    3: ["2ab", "a2b", "ab2"],
    4: ["2aabb0", "a2ab0b", "aa20bb", "ab02ab", "a0ba2b", "0abab2"],
    5: [
        "2aaabbb000", "a2aab00bb0", "aa2a0b0b0b", "aaa200b0bb",
        "ab002aabb0", "a0b0a2ab0b", "a00baa20bb",
        "0ab0ab02ab", "0a0ba0ba2b", "00ab0abab2",
    ],
}


def test_pair_index_anchors():
    assert pair_index(1, 2, 5) == 1
    for n in range(3, 9):
        assert pair_index(2, 3, n) == n
        assert pair_unindex(n, n) == (2, 3)
    assert pair_index(4, 5, 5) == 10
    assert pair_unindex(1, 5) == (1, 2)
    assert pair_unindex(10, 5) == (4, 5)


def test_pair_index_formula_beats_prose_example():
    # the formula gives 3 for (1, 4); a prose example elsewhere says 4
    assert pair_index(1, 4, 5) == 3


def test_pair_index_enumeration_oracle():
    for n in range(2, 13):
        pairs = list(itertools.combinations(range(1, n + 1), 2))
        for b, (i, j) in enumerate(pairs, start=1):
            assert pair_index(i, j, n) == b
            assert pair_unindex(b, n) == (i, j)


@pytest.mark.parametrize("args", [(2, 2, 4), (3, 2, 4), (0, 2, 4), (1, 5, 4)])
def test_pair_index_errors(args):
    with pytest.raises(ValueError):
        pair_index(*args)


def test_pair_unindex_range():
    with pytest.raises(ValueError):
        pair_unindex(0, 4)
    with pytest.raises(ValueError):
        pair_unindex(7, 4)


def test_gate_pair_index():
    order = ["xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"]
    for f, (mu, nu) in enumerate(order, start=1):
        assert gate_pair_index(mu, nu) == f
    assert gate_pair_index("y", "z") == 6 and gate_pair_index("z", "x") == 7


def test_global_index():
    assert global_index(1, 2, "x", "x", 5) == 1
    assert global_index(2, 3, "y", "z", 5) == 42
    assert global_index(4, 5, "z", "z", 5) == 90
    for g in range(1, 91):
        assert global_index(*global_unindex(g, 5), 5) == g


def test_conjugation_sign():
    assert conjugation_sign("I", "z") == 1
    assert conjugation_sign("Y", "x") == -1
    assert conjugation_sign("X", "x") == 1
    P = {"X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1]), "I": np.eye(2)}
    for g in "IXYZ":
        for a in "xyz":
            conj = P[g] @ P[a.upper()] @ P[g]
            assert np.allclose(conj, conjugation_sign(g, a) * P[a.upper()])


def test_column_examples():
    assert np.all(column_for_selection("III", 3) == 1)
    col = column_for_selection("XIY", 3)
    assert col[global_index(2, 3, "y", "z", 3) - 1] == -1
    assert column_for_selection("XX", 2).tolist() == [1, -1, -1, -1, 1, 1, -1, 1, 1]
    assert np.array_equal(column_for_selection("XX", 2), M2[:, 0])


def test_column_depends_only_on_pair_gates():
    rng = np.random.default_rng(0)
    n = 4
    for _ in range(20):
        a = "".join(rng.choice(list("IXYZ"), n))
        b = list("".join(rng.choice(list("IXYZ"), n)))
        b[0], b[2] = a[0], a[2]
        ca, cb = column_for_selection(a, n), column_for_selection("".join(b), n)
        lo = 9 * (pair_index(1, 3, n) - 1)
        assert np.array_equal(ca[lo:lo + 9], cb[lo:lo + 9])


def test_subblock_tables():
    assert np.all(M0 == 1)
    assert np.all(np.diag(M2) == 1)
    assert M11[0].tolist() == [1, 1, 1, -1, -1, -1, -1, -1, -1]
    with pytest.raises(ValueError):
        subblock("M3")
    with pytest.raises(ValueError):
        M2[0, 0] = 5


def test_subblock_algebra_exact():
    A, B, C, D = (m.astype(np.int64) for m in (M2, M11, M12, M0))
    for X, Y in itertools.combinations((A, B, C, D), 2):
        assert np.array_equal(X @ Y, Y @ X)
    assert np.array_equal(B @ C, D) and np.array_equal(A @ D, D)
    assert np.array_equal(B @ D, -3 * D) and np.array_equal(C @ D, -3 * D)
    assert np.array_equal(D @ D, 9 * D)
    assert np.array_equal(B @ B, -3 * A @ B)
    assert np.array_equal(C @ C, -3 * A @ C)
    assert all(sm.subblock_identities().values())


def test_subblock_kind_examples():
    assert subblock_kind_for(3, 3, 4) == "M2"
    assert subblock_kind_for(pair_index(1, 2, 4), pair_index(3, 4, 4), 4) == "M0"
    assert subblock_kind_for(pair_index(2, 3, 4), pair_index(1, 3, 4), 4) == "M12"


@pytest.mark.parametrize("n", [3, 4, 5])
def test_layout_matches_printed(n):
    printed = [[_S[c] for c in row] for row in PRINTED[n]]
    assert protocol_layout(n) == printed


def test_m0_symmetry():
    for n in range(2, 8):
        L = protocol_layout(n)
        for I, J in itertools.product(range(len(L)), repeat=2):
            assert (L[I][J] == "M0") == (L[J][I] == "M0")


def test_m2_is_single_block():
    assert np.array_equal(build_protocol_matrix(2).entries, M2)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_protocol_matrix_structure(n):
    M = build_protocol_matrix(n)
    N = sm.num_pairs(n)
    assert M.shape == (9 * N, 9 * N)
    assert set(np.unique(M.entries)) <= {-1, 1}
    for k, sel in enumerate(M.column_gates):
        assert np.array_equal(M.entries[:, k], column_for_selection(sel, n))
    for I in range(N):
        assert np.array_equal(M.entries[9 * I:9 * I + 9, 9 * I:9 * I + 9], M2)
    assert np.array_equal(build_protocol_matrix_recursive(n), M.entries)


def test_n4_corner_is_m0():
    M = build_protocol_matrix(4).entries
    assert np.all(M[0:9, 45:54] == 1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_blocks_match_tables_up_to_orientation(n):
    # aligned blocks equal the printed table; crossed blocks have their gate pairs transposed
    M = build_protocol_matrix(n).entries
    N = sm.num_pairs(n)
    for I, J in itertools.product(range(1, N + 1), repeat=2):
        blk = M[9 * (I - 1):9 * I, 9 * (J - 1):9 * J]
        kind = subblock_kind_for(I, J, n)
        iI, jI = pair_unindex(I, n)
        iJ, jJ = pair_unindex(J, n)
        if I != J and (iI == jJ or jI == iJ):
            assert np.array_equal(blk, subblock(kind)[:, [0, 3, 6, 1, 4, 7, 2, 5, 8]])
        else:
            assert np.array_equal(blk, subblock(kind))


def test_zz_matrix():
    assert zz_matrix(2).tolist() == [[1]]
    assert np.array_equal(zz_matrix(3), 2 * np.eye(3, dtype=int) - np.ones((3, 3), dtype=int))
    assert round(np.linalg.det(zz_matrix(4).astype(float))) == 0
    assert not is_nonsingular(zz_matrix(4))


def test_is_nonsingular_examples():
    assert is_nonsingular(build_protocol_matrix(3).entries)
    # +1 diagonal, -1 off-diagonal: det = 1 - 1 = 0, so this one is singular
    assert is_nonsingular(np.array([[1, -1], [-1, 1]])) is False
    assert is_nonsingular(np.array([[1, -1], [1, 1]]))
    with pytest.raises(ValueError):
        is_nonsingular(np.ones((2, 3)))


def test_exact_rank_against_numpy():
    rng = np.random.default_rng(1)
    for _ in range(30):
        m, k = rng.integers(1, 8, size=2)
        r = rng.integers(1, min(m, k) + 1)
        A = rng.integers(-3, 4, size=(m, r)) @ rng.integers(-3, 4, size=(r, k))
        assert exact_rank(A) == np.linalg.matrix_rank(A.astype(float))


def test_exact_rank_landmarks():
    assert exact_rank(zz_matrix(4)) == 3
    for n in (2, 3, 5, 6, 7):
        assert exact_rank(zz_matrix(n)) == sm.num_pairs(n)


@pytest.mark.parametrize("n", [2, 3])
def test_barycenter(n):
    cols = selection_columns(list(iter_pool(n)), n).astype(np.int64)
    assert cols.shape[1] == 4 ** n
    assert not cols.sum(axis=1).any()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sign_balance(n):
    _, cols = pool_matrix(n)
    assert np.all((cols == -1).sum(axis=1) == 4 ** n // 2)


def test_pool_order_and_size():
    pool = list(iter_pool(3))
    assert len(pool) == 64 == len(set(pool))
    assert pool[0] == "III"
    assert pool[1:28] == sm.protocol_selections(3)
    rest = pool[28:]
    assert rest == sorted(rest, key=lambda s: ["IXYZ".index(c) for c in s])
    zz = list(iter_pool(3, "zz"))
    assert zz[:4] == ["III", "XXI", "XIX", "IXX"] and len(zz) == 8


def test_pool_cap():
    with pytest.raises(ValueError, match="cap"):
        pool_matrix(9)
