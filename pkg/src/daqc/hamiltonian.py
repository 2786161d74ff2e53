"""Two-body Hamiltonians on n qubits: data model, file format, dense form and norms.

A Hamiltonian is stored as a sparse map ``(i, j, mu, nu) -> strength`` with
1-based qubit labels ``i < j`` and Pauli axes ``mu, nu`` in ``"xyz"``.
Qubit 1 is the leftmost tensor factor of every dense matrix.

File format (JSON)::

    {
      "n": 3,
      "couplings": [
        {"i": 1, "j": 2, "mu": "x", "nu": "x", "strength": 1.0},
        ...
      ]
    }

Both levels reject unknown fields.  Explicit zero strengths are accepted and
dropped.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .exceptions import UnsimulableError

AXES = ("x", "y", "z")
_AXIS_RANK = {a: k for k, a in enumerate(AXES)}

DENSE_CAP = 10

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_HEADER_FIELDS = {"n", "couplings"}
_RECORD_FIELDS = {"i", "j", "mu", "nu", "strength"}


def axis_rank(axis: str) -> int:
    """Position of a Pauli axis in the order x < y < z."""
    try:
        return _AXIS_RANK[axis]
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected one of x, y, z") from None


def _check_key(n: int, i: int, j: int, mu: str, nu: str) -> None:
    if not (isinstance(i, int) and isinstance(j, int)):
        raise ValueError(f"qubit indices must be integers, got ({i!r}, {j!r})")
    if i >= j:
        raise ValueError(f"non-canonical pair order ({i}, {j}): require i < j")
    if i < 1 or j > n:
        raise ValueError(f"qubit index out of range [1, {n}] in pair ({i}, {j})")
    axis_rank(mu)
    axis_rank(nu)


@dataclass(frozen=True)
class TwoBodyHamiltonian:
    """Immutable two-body Hamiltonian ``sum h_{ij}^{mu nu} sigma^mu_i sigma^nu_j``."""

    n: int
    couplings: Mapping[tuple[int, int, str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"qubit count must be an integer >= 2, got {self.n!r}")
        clean = {}
        for key, value in dict(self.couplings).items():
            i, j, mu, nu = key
            _check_key(self.n, i, j, mu, nu)
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"non-finite strength {value} for {key}")
            if value != 0.0:
                clean[(i, j, mu, nu)] = value
        ordered = dict(sorted(clean.items(), key=lambda kv: _sort_key(kv[0])))
        object.__setattr__(self, "couplings", MappingProxyType(ordered))

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[int, int, str, str, float]]):
        """Build from ``(i, j, mu, nu, strength)`` tuples, rejecting duplicate keys."""
        couplings = {}
        for i, j, mu, nu, s in terms:
            key = (i, j, mu, nu)
            if key in couplings:
                raise ValueError(f"duplicate coupling {key}")
            couplings[key] = s
        return cls(n, couplings)

    def strength(self, i: int, j: int, mu: str, nu: str) -> float:
        return self.couplings.get((i, j, mu, nu), 0.0)

    def scaled(self, factor: float) -> "TwoBodyHamiltonian":
        return TwoBodyHamiltonian(self.n, {k: factor * v for k, v in self.couplings.items()})

    def __add__(self, other: "TwoBodyHamiltonian") -> "TwoBodyHamiltonian":
        if self.n != other.n:
            raise ValueError("cannot add Hamiltonians on different qubit counts")
        out = dict(self.couplings)
        for k, v in other.couplings.items():
            out[k] = out.get(k, 0.0) + v
        return TwoBodyHamiltonian(self.n, out)

    def __len__(self) -> int:
        return len(self.couplings)

    def is_zz_only(self) -> bool:
        return all(mu == "z" and nu == "z" for (_, _, mu, nu) in self.couplings)


def _sort_key(key):
    i, j, mu, nu = key
    return (i, j, _AXIS_RANK[mu], _AXIS_RANK[nu])


def all_keys(n: int):
    """Every (i, j, mu, nu) in global-index order."""
    for i, j in itertools.combinations(range(1, n + 1), 2):
        for mu, nu in itertools.product(AXES, AXES):
            yield (i, j, mu, nu)


# ---------------------------------------------------------------------------
# file format

def parse_hamiltonian(text: str) -> TwoBodyHamiltonian:
    """Parse the JSON Hamiltonian format.

    Raises ``ValueError`` on unknown fields, duplicate keys, ``i >= j``,
    out-of-range qubits or non-finite strengths.  Pairs given as ``(j, i)``
    are rejected rather than reordered.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed Hamiltonian file: {exc}") from None
    if not isinstance(doc, dict):
        raise ValueError("Hamiltonian file must hold a JSON object")
    unknown = set(doc) - _HEADER_FIELDS
    if unknown:
        raise ValueError(f"unknown header field(s): {sorted(unknown)}")
    if "n" not in doc:
        raise ValueError("missing header field 'n'")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValueError(f"'n' must be an integer, got {n!r}")
    terms = []
    for rec in doc.get("couplings", []):
        if not isinstance(rec, dict):
            raise ValueError(f"coupling record must be an object, got {rec!r}")
        unknown = set(rec) - _RECORD_FIELDS
        if unknown:
            raise ValueError(f"unknown coupling field(s): {sorted(unknown)}")
        missing = _RECORD_FIELDS - set(rec)
        if missing:
            raise ValueError(f"coupling record missing field(s): {sorted(missing)}")
        s = rec["strength"]
        if isinstance(s, bool) or not isinstance(s, (int, float)):
            raise ValueError(f"strength must be a number, got {s!r}")
        terms.append((rec["i"], rec["j"], rec["mu"], rec["nu"], float(s)))
    return TwoBodyHamiltonian.from_terms(n, terms)


def _fmt(x: float) -> str:
    return repr(float(f"{x:.17g}"))


def format_hamiltonian(H: TwoBodyHamiltonian) -> str:
    """Serialize to the canonical JSON form (round-trips exactly through the parser)."""
    lines = ['{', f'  "n": {H.n},', '  "couplings": [']
    recs = [
        f'    {{"i": {i}, "j": {j}, "mu": "{mu}", "nu": "{nu}", "strength": {_fmt(s)}}}'
        for (i, j, mu, nu), s in H.couplings.items()
    ]
    if recs:
        lines.append(",\n".join(recs))
    lines += ['  ]', '}']
    return "\n".join(lines) + "\n"


def load_hamiltonian(path) -> TwoBodyHamiltonian:
    with open(path, encoding="utf-8") as fh:
        return parse_hamiltonian(fh.read())


def save_hamiltonian(H: TwoBodyHamiltonian, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_hamiltonian(H))


def hamiltonian_digest(H: TwoBodyHamiltonian) -> str:
    """SHA-256 of the canonical serialization."""
    return hashlib.sha256(format_hamiltonian(H).encode()).hexdigest()


# ---------------------------------------------------------------------------
# dense representation

def pauli_string(n: int, ops: Mapping[int, str]) -> np.ndarray:
    """Dense ``2^n`` matrix of a Pauli string given as ``{qubit: 'X'|'Y'|'Z'}``."""
    out = np.ones((1, 1), dtype=complex)
    for q in range(1, n + 1):
        out = np.kron(out, PAULI[ops.get(q, "I")])
    return out


def dense_matrix(H: TwoBodyHamiltonian, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense Hermitian matrix of ``H`` (qubit 1 leftmost)."""
    if H.n > cap:
        raise ValueError(f"n = {H.n} exceeds dense cap {cap}")
    dim = 2 ** H.n
    out = np.zeros((dim, dim), dtype=complex)
    for (i, j, mu, nu), s in H.couplings.items():
        out += s * pauli_string(H.n, {i: mu.upper(), j: nu.upper()})
    return out


def frobenius_norm(A) -> float:
    """``sqrt(sum |a_ij|^2)``."""
    A = np.asarray(A)
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


def hamiltonian_norm(H: TwoBodyHamiltonian) -> float:
    """Frobenius norm of ``dense_matrix(H)`` without building it.

    Distinct Pauli strings are trace-orthogonal, so the squared norm is
    ``2^n`` times the sum of squared strengths.
    """
    return math.sqrt(2.0 ** H.n * sum(s * s for s in H.couplings.values()))


# ---------------------------------------------------------------------------
# right-hand side of the block-time system

@dataclass(frozen=True)
class CouplingVector:
    """Entries ``T g/h`` on the retained rows.

    ``active_rows`` holds 1-based row labels (global indices for the general
    protocol, pair indices for the ZZ protocol) in increasing order.
    """

    entries: np.ndarray
    active_rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != len(self.active_rows):
            raise ValueError("entries and active_rows differ in length")

    def __len__(self) -> int:
        return len(self.active_rows)


def ratio_vector(
    target: TwoBodyHamiltonian,
    source: TwoBodyHamiltonian,
    T: float,
    protocol: str = "general",
) -> CouplingVector:
    """Return ``T * g/h`` over every coupling the source actually has.

    Rows where both couplings vanish are dropped; a nonzero target coupling
    with no source counterpart raises :class:`UnsimulableError`.  With
    ``protocol="zz"`` both Hamiltonians must be pure ZZ and rows are indexed
    by pair index.
    """
    from .signmatrix import global_index, pair_index

    if target.n != source.n:
        raise ValueError(f"qubit counts differ: target {target.n}, source {source.n}")
    if not T > 0:
        raise ValueError(f"simulation time must be positive, got {T}")
    for key, g in target.couplings.items():
        if key not in source.couplings:
            raise UnsimulableError(key, g)
    n = source.n
    if protocol == "zz":
        for H, name in ((source, "source"), (target, "target")):
            if not H.is_zz_only():
                raise ValueError(f"ZZ protocol requires a pure ZZ {name} Hamiltonian")
        rows = [(pair_index(i, j, n), (i, j, mu, nu)) for (i, j, mu, nu) in source.couplings]
    elif protocol == "general":
        rows = [(global_index(*key, n), key) for key in source.couplings]
    else:
        raise ValueError(f"unknown protocol {protocol!r}")
    rows.sort()
    entries = np.array([T * target.strength(*key) / source.couplings[key] for _, key in rows])
    return CouplingVector(entries, tuple(r for r, _ in rows))


# ---------------------------------------------------------------------------
# named instances used in the examples and experiments

def xy_chain(n: int, g: float = 1.0) -> TwoBodyHamiltonian:
    """Nearest-neighbour XY chain ``g sum (XX + YY)``."""
    terms = {}
    for i in range(1, n):
        terms[(i, i + 1, "x", "x")] = g
        terms[(i, i + 1, "y", "y")] = g
    return TwoBodyHamiltonian(n, terms)


def cross_resonance_chain(n: int, strengths=1.0) -> TwoBodyHamiltonian:
    """Nearest-neighbour ``h^xz XZ + h^zx ZX + h^zz ZZ`` chain.

    ``strengths`` is a scalar or an ``(n-1, 3)`` array ordered ``(xz, zx, zz)``.
    """
    h = np.broadcast_to(np.asarray(strengths, dtype=float), (n - 1, 3))
    terms = {}
    for i in range(1, n):
        xz, zx, zz = h[i - 1]
        terms[(i, i + 1, "x", "z")] = xz
        terms[(i, i + 1, "z", "x")] = zx
        terms[(i, i + 1, "z", "z")] = zz
    return TwoBodyHamiltonian(n, terms)


def zz_all_to_all(n: int, strengths) -> TwoBodyHamiltonian:
    """All-to-all ZZ Hamiltonian; ``strengths`` in pair-index order."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    strengths = np.asarray(strengths, dtype=float)
    if strengths.shape != (len(pairs),):
        raise ValueError(f"expected {len(pairs)} strengths, got shape {strengths.shape}")
    return TwoBodyHamiltonian(n, {(i, j, "z", "z"): s for (i, j), s in zip(pairs, strengths)})


def random_hamiltonian(n: int, rng, low: float = 0.5, high: float = 1.5) -> TwoBodyHamiltonian:
    """Dense random Hamiltonian: every strength has magnitude in ``[low, high]`` and random sign."""
    keys = list(all_keys(n))
    mags = rng.uniform(low, high, size=len(keys))
    signs = rng.choice([-1.0, 1.0], size=len(keys))
    return TwoBodyHamiltonian(n, dict(zip(keys, mags * signs)))
