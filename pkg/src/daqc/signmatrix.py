"""Pauli-conjugation sign algebra and the protocol sign matrices.

Sandwiching an analog block between identical Pauli layers ``G`` turns
``sigma^mu_i sigma^nu_j`` into ``s(G_i, mu) s(G_j, nu) sigma^mu_i sigma^nu_j``
with ``s = +1`` when the gate is the identity or matches the axis and ``-1``
otherwise.  Every column of a sign matrix is one such gate selection; every
row is one coupling.

Indexing is 1-based throughout:

* pair index ``b(i, j, n) = n(i-1) - i(i+1)/2 + j`` for ``1 <= i < j <= n``
* gate-pair index ``f(mu, nu) = 3 rank(mu) + rank(nu) + 1`` over xx, xy, ..., zz
* global index ``g = 9 (b - 1) + f``

Gate selections are strings over ``"IXYZ"``; character ``q-1`` is the gate on
qubit ``q``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .hamiltonian import AXES, axis_rank

GATES = "IXYZ"
POOL_CAP = 8

M2 = np.array([
    [1, -1, -1, -1, 1, 1, -1, 1, 1],
    [-1, 1, -1, 1, -1, 1, 1, -1, 1],
    [-1, -1, 1, 1, 1, -1, 1, 1, -1],
    [-1, 1, 1, 1, -1, -1, -1, 1, 1],
    [1, -1, 1, -1, 1, -1, 1, -1, 1],
    [1, 1, -1, -1, -1, 1, 1, 1, -1],
    [-1, 1, 1, -1, 1, 1, 1, -1, -1],
    [1, -1, 1, 1, -1, 1, -1, 1, -1],
    [1, 1, -1, 1, 1, -1, -1, -1, 1],
], dtype=np.int8)

M11 = np.array([
    [1, 1, 1, -1, -1, -1, -1, -1, -1],
    [1, 1, 1, -1, -1, -1, -1, -1, -1],
    [1, 1, 1, -1, -1, -1, -1, -1, -1],
    [-1, -1, -1, 1, 1, 1, -1, -1, -1],
    [-1, -1, -1, 1, 1, 1, -1, -1, -1],
    [-1, -1, -1, 1, 1, 1, -1, -1, -1],
    [-1, -1, -1, -1, -1, -1, 1, 1, 1],
    [-1, -1, -1, -1, -1, -1, 1, 1, 1],
    [-1, -1, -1, -1, -1, -1, 1, 1, 1],
], dtype=np.int8)

M12 = np.array([
    [1, -1, -1, 1, -1, -1, 1, -1, -1],
    [-1, 1, -1, -1, 1, -1, -1, 1, -1],
    [-1, -1, 1, -1, -1, 1, -1, -1, 1],
    [1, -1, -1, 1, -1, -1, 1, -1, -1],
    [-1, 1, -1, -1, 1, -1, -1, 1, -1],
    [-1, -1, 1, -1, -1, 1, -1, -1, 1],
    [1, -1, -1, 1, -1, -1, 1, -1, -1],
    [-1, 1, -1, -1, 1, -1, -1, 1, -1],
    [-1, -1, 1, -1, -1, 1, -1, -1, 1],
], dtype=np.int8)

M0 = np.ones((9, 9), dtype=np.int8)

SUBBLOCKS = {"M2": M2, "M11": M11, "M12": M12, "M0": M0}
for _m in SUBBLOCKS.values():
    _m.setflags(write=False)

# column permutation f(mu, nu) -> f(nu, mu)
_SWAP_GATE_PAIR = np.array([3 * (f % 3) + f // 3 for f in range(9)])


# ---------------------------------------------------------------------------
# index maps

def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def dimension(n: int) -> int:
    """Number of couplings (rows) of an n-qubit two-body Hamiltonian."""
    return 9 * num_pairs(n)


def pair_index(i: int, j: int, n: int) -> int:
    if not 1 <= i < j <= n:
        raise ValueError(f"invalid pair ({i}, {j}) for n = {n}")
    return n * (i - 1) - i * (i + 1) // 2 + j


def pair_unindex(b: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`pair_index`: ``i = n - floor(sqrt(n(n-1) - 2b + 2) + 1/2)``."""
    if not 1 <= b <= num_pairs(n):
        raise ValueError(f"pair index {b} out of range [1, {num_pairs(n)}]")
    m = n * (n - 1) - 2 * b + 2
    r = math.isqrt(m)
    if 4 * m >= (2 * r + 1) ** 2:  # exact floor(sqrt(m) + 1/2)
        r += 1
    i = n - r
    j = b - n * (i - 1) + i * (i + 1) // 2
    return i, j


def gate_pair_index(mu: str, nu: str) -> int:
    return 3 * axis_rank(mu) + axis_rank(nu) + 1


def global_index(i: int, j: int, mu: str, nu: str, n: int) -> int:
    return 9 * (pair_index(i, j, n) - 1) + gate_pair_index(mu, nu)


def global_unindex(g: int, n: int) -> tuple[int, int, str, str]:
    if not 1 <= g <= dimension(n):
        raise ValueError(f"global index {g} out of range [1, {dimension(n)}]")
    b, f = divmod(g - 1, 9)
    i, j = pair_unindex(b + 1, n)
    return i, j, AXES[f // 3], AXES[f % 3]


# ---------------------------------------------------------------------------
# sign algebra

def conjugation_sign(gate: str, axis: str) -> int:
    """Sign picked up by ``sigma^axis`` under ``gate . sigma^axis . gate``."""
    if gate not in GATES:
        raise ValueError(f"unknown gate {gate!r}")
    axis_rank(axis)
    return 1 if gate == "I" or gate.lower() == axis else -1


# _SIGN[g, a] for g in IXYZ, a in xyz
_SIGN = np.array([[conjugation_sign(g, a) for a in AXES] for g in GATES], dtype=np.int8)


def check_selection(sel: str, n: int) -> str:
    if len(sel) != n or any(c not in GATES for c in sel):
        raise ValueError(f"gate selection {sel!r} is not a length-{n} string over {GATES}")
    return sel


def _row_tables(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    qi = np.repeat([p[0] for p in pairs], 9)
    qj = np.repeat([p[1] for p in pairs], 9)
    mu = np.tile(np.repeat(np.arange(3), 3), len(pairs))
    nu = np.tile(np.tile(np.arange(3), 3), len(pairs))
    return qi, qj, mu, nu


def selection_columns(selections, n: int) -> np.ndarray:
    """Sign matrix whose columns are the given selections (int8, rows in global order)."""
    codes = np.array([[GATES.index(c) for c in check_selection(s, n)] for s in selections],
                     dtype=np.intp).reshape(-1, n)
    qi, qj, mu, nu = _row_tables(n)
    return (_SIGN[codes[:, qi], mu] * _SIGN[codes[:, qj], nu]).T.astype(np.int8)


def column_for_selection(sel: str, n: int) -> np.ndarray:
    return selection_columns([sel], n)[:, 0]


def zz_selection_columns(selections, n: int) -> np.ndarray:
    """Like :func:`selection_columns` but keeping only the ZZ rows (pair-index order)."""
    return selection_columns(selections, n)[8::9]


# ---------------------------------------------------------------------------
# sub-blocks

def subblock(kind: str) -> np.ndarray:
    try:
        return SUBBLOCKS[kind]
    except KeyError:
        raise ValueError(f"unknown sub-block kind {kind!r}") from None


def subblock_kind_for(I: int, J: int, n: int) -> str:
    """Kind of the 9x9 block coupling row pair ``I`` to column pair ``J``."""
    if I == J:
        pair_unindex(I, n)
        return "M2"
    iI, jI = pair_unindex(I, n)
    iJ, jJ = pair_unindex(J, n)
    if iI in (iJ, jJ):
        return "M11"
    if jI in (iJ, jJ):
        return "M12"
    return "M0"


def _is_crossed(I: int, J: int, n: int) -> bool:
    """True when the shared qubit sits in different slots of the two pairs."""
    if I == J:
        return False
    iI, jI = pair_unindex(I, n)
    iJ, jJ = pair_unindex(J, n)
    return iI == jJ or jI == iJ


def oriented_block(kind: str, crossed: bool) -> np.ndarray:
    """Tabulated sub-block, with gate pairs transposed when the shared qubit is crossed.

    The printed tables assume the shared qubit holds the same slot (first or
    second) in both pairs.  When it does not, the gate acting on it is the
    other member of the column's gate pair, which permutes the columns
    ``f(mu, nu) -> f(nu, mu)``.
    """
    block = subblock(kind)
    return block[:, _SWAP_GATE_PAIR] if crossed else block


def block_for(I: int, J: int, n: int) -> np.ndarray:
    return oriented_block(subblock_kind_for(I, J, n), _is_crossed(I, J, n))


def protocol_layout(n: int) -> list[list[str]]:
    """Grid of sub-block kinds, ``layout[I-1][J-1]``."""
    N = num_pairs(n)
    return [[subblock_kind_for(I, J, n) for J in range(1, N + 1)] for I in range(1, N + 1)]


def _validate_subblocks() -> None:
    # the tables must agree with the sign rule on an aligned two-pair example
    sels = ["".join(p) for p in itertools.product("XYZ", repeat=2)]
    m2 = selection_columns(sels, 2)
    m11 = selection_columns([a + "I" + b for a, b in itertools.product("XYZ", repeat=2)], 3)[0:9]
    m12 = selection_columns([a + "I" + b for a, b in itertools.product("XYZ", repeat=2)], 3)[18:27]
    m0 = selection_columns([a + b + "I" + "I" for a, b in itertools.product("XYZ", repeat=2)], 4)[45:54]
    for name, got in (("M2", m2), ("M11", m11), ("M12", m12), ("M0", m0)):
        if not np.array_equal(got, SUBBLOCKS[name]):
            raise AssertionError(f"sub-block table {name} disagrees with the conjugation rule")


_validate_subblocks()


# ---------------------------------------------------------------------------
# protocol matrices

@dataclass(frozen=True)
class SignMatrix:
    """Square +-1 matrix with the gate selection behind each column."""

    n: int
    entries: np.ndarray
    column_gates: tuple[str, ...]

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def protocol_selections(n: int) -> list[str]:
    """Selections of the general protocol: gate pair ``f`` on qubit pair ``J``, in (J, f) order."""
    out = []
    for i, j in itertools.combinations(range(n), 2):
        for a, b in itertools.product("XYZ", repeat=2):
            sel = ["I"] * n
            sel[i], sel[j] = a, b
            out.append("".join(sel))
    return out


def build_protocol_matrix(n: int) -> SignMatrix:
    """General-protocol matrix from the column generator."""
    if n < 2:
        raise ValueError(f"protocol needs n >= 2, got {n}")
    sels = protocol_selections(n)
    return SignMatrix(n, selection_columns(sels, n), tuple(sels))


def build_protocol_matrix_recursive(n: int) -> np.ndarray:
    """General-protocol matrix from the block recursion ``[[A, P], [Q, M(n-1)]]``.

    Independent of the conjugation rule: uses only the tabulated sub-blocks
    and the A/P/Q block-selection rules.
    """
    if n < 2:
        raise ValueError(f"protocol needs n >= 2, got {n}")
    if n == 2:
        return M2.copy()
    inner = build_protocol_matrix_recursive(n - 1)
    N = num_pairs(n)
    out = np.empty((9 * N, 9 * N), dtype=np.int8)

    def put(I, J, kind, crossed=False):
        out[9 * (I - 1):9 * I, 9 * (J - 1):9 * J] = oriented_block(kind, crossed)

    # A(n): pairs sharing qubit 1
    for I in range(1, n):
        for J in range(1, n):
            put(I, J, "M2" if I == J else "M11")
    # P(n): rows (1, j), columns on qubits 2..n
    for I in range(1, n):
        _, jI = pair_unindex(I, n)
        for J in range(n, N + 1):
            iJ, jJ = pair_unindex(J, n)
            if jI == jJ:
                put(I, J, "M12")
            elif jI == iJ:
                put(I, J, "M12", crossed=True)
            else:
                put(I, J, "M0")
    # Q(n): rows on qubits 2..n, columns (1, m)
    for I in range(n, N + 1):
        iI, jI = pair_unindex(I, n)
        for J in range(1, n):
            _, jJ = pair_unindex(J, n)
            if iI == jJ:
                put(I, J, "M11", crossed=True)
            elif jI == jJ:
                put(I, J, "M12")
            else:
                put(I, J, "M0")
    out[9 * (n - 1):, 9 * (n - 1):] = inner
    return out


def zz_matrix(n: int) -> np.ndarray:
    """``M[(i,j),(l,m)] = (-1)^(d_il + d_im + d_jl + d_jm)`` in pair-index order."""
    if n < 2:
        raise ValueError(f"protocol needs n >= 2, got {n}")
    pairs = list(itertools.combinations(range(n), 2))
    out = np.empty((len(pairs), len(pairs)), dtype=np.int8)
    for r, (i, j) in enumerate(pairs):
        for c, (l, m) in enumerate(pairs):
            out[r, c] = (-1) ** ((i == l) + (i == m) + (j == l) + (j == m))
    return out


def zz_protocol_selections(n: int) -> list[str]:
    """X on both qubits of each pair, in pair-index order."""
    out = []
    for i, j in itertools.combinations(range(n), 2):
        sel = ["I"] * n
        sel[i] = sel[j] = "X"
        out.append("".join(sel))
    return out


# ---------------------------------------------------------------------------
# selection pools for the non-negative solve

def iter_pool(n: int, protocol: str = "general") -> Iterator[str]:
    """Every selection exactly once: identity, protocol columns, then the rest lexicographically.

    The general pool draws from ``IXYZ`` (``4^n`` selections), the ZZ pool from ``IX``.
    """
    if protocol not in ("general", "zz"):
        raise ValueError(f"unknown protocol {protocol!r}")
    alphabet = "IXYZ" if protocol == "general" else "IX"
    head = ["I" * n]
    head += protocol_selections(n) if protocol == "general" else zz_protocol_selections(n)
    seen = set(head)
    yield from head
    for combo in itertools.product(alphabet, repeat=n):
        sel = "".join(combo)
        if sel not in seen:
            yield sel


def pool_size(n: int, protocol: str = "general") -> int:
    return (4 if protocol == "general" else 2) ** n


def pool_matrix(n: int, protocol: str = "general", cap: int = POOL_CAP):
    """Materialize the pool as ``(selections, signs)``; refuses beyond ``cap`` qubits."""
    if n > cap:
        raise ValueError(f"n = {n} exceeds the selection-pool cap {cap}")
    sels = list(iter_pool(n, protocol))
    cols = selection_columns(sels, n)
    if protocol == "zz":
        cols = cols[8::9]
    return sels, cols


# ---------------------------------------------------------------------------
# singularity

def is_nonsingular(M) -> bool:
    """Smallest singular value above ``1e-8 * dim``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size == 0:
        return True
    smin = np.linalg.svd(M, compute_uv=False).min()
    return bool(smin > 1e-8 * M.shape[0])


def exact_rank(M) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination on Python ints."""
    rows = [[int(v) for v in row] for row in np.asarray(M)]
    if not rows:
        return 0
    m, ncols = len(rows), len(rows[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, m) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank]
        for r in range(rank + 1, m):
            row = rows[r]
            a = row[col]
            rows[r] = [(p[col] * row[k] - a * p[k]) // prev for k in range(ncols)]
        prev = p[col]
        rank += 1
        if rank == m:
            break
    return rank


def subblock_identities() -> dict:
    """Exact integer check of the sub-block algebra; maps each identity to True/False."""
    A, B, C, D = (SUBBLOCKS[k].astype(np.int64) for k in ("M2", "M11", "M12", "M0"))
    blocks = (A, B, C, D)
    return {
        "pairwise commutation": all(np.array_equal(X @ Y, Y @ X) for X, Y in itertools.combinations(blocks, 2)),
        "M11 M12 = M2 M0 = M0": np.array_equal(B @ C, D) and np.array_equal(A @ D, D),
        "M11 M0 = M12 M0 = -3 M0": np.array_equal(B @ D, -3 * D) and np.array_equal(C @ D, -3 * D),
        "M0^2 = 9 M0": np.array_equal(D @ D, 9 * D),
        "M11^2 = -3 M2 M11": np.array_equal(B @ B, -3 * A @ B),
        "M12^2 = -3 M2 M12": np.array_equal(C @ C, -3 * A @ C),
    }
