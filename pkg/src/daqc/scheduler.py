"""Block-time solvers, schedules, Trotterization and error diagnostics.

A schedule is a sequence of analog blocks, each an evolution under the source
Hamiltonian sandwiched by a Pauli layer.  The block durations ``t`` solve
``M t = T g/h`` where the columns of ``M`` are the sign patterns of the
chosen sandwiches (see :mod:`daqc.signmatrix`).

Schedule file format (JSON, durations with 17 significant digits)::

    {
      "format": "daqc-schedule",
      "n": 3,
      "trotter_steps": 1,
      "T": 1,
      "source_sha256": "...",
      "blocks": [{"duration": 0.5, "gates": "XIY"}, ...]
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .exceptions import NegativeTimeError, ResidualError, SingularSystemError
from .hamiltonian import (
    CouplingVector,
    TwoBodyHamiltonian,
    hamiltonian_digest,
    hamiltonian_norm,
    ratio_vector,
)
from .nnls import nnls
from .signmatrix import (
    POOL_CAP,
    build_protocol_matrix,
    check_selection,
    global_index,
    is_nonsingular,
    pool_matrix,
    selection_columns,
    zz_matrix,
    zz_protocol_selections,
)

ZERO_THRESHOLD = 1e-12
EXACT_RTOL = 1e-9
NNLS_TOL = 1e-8


@dataclass(frozen=True)
class AnalogBlock:
    duration: float
    sandwich: str


@dataclass(frozen=True)
class Schedule:
    """Blocks of one Trotter step, at full duration ``t_k``.

    Execution repeats the block list ``trotter_steps`` times with every
    duration divided by ``trotter_steps``.
    """

    n: int
    source: TwoBodyHamiltonian
    blocks: tuple[AnalogBlock, ...]
    trotter_steps: int = 1
    T: float = 1.0

    def __post_init__(self):
        if self.trotter_steps < 1:
            raise ValueError(f"trotter_steps must be >= 1, got {self.trotter_steps}")
        if self.source.n != self.n:
            raise ValueError("source Hamiltonian acts on a different number of qubits")
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for b in self.blocks:
            check_selection(b.sandwich, self.n)

    @property
    def total_analog_time(self) -> float:
        return float(sum(b.duration for b in self.blocks))

    def expanded(self) -> list[AnalogBlock]:
        """Time-ordered blocks as executed: ``trotter_steps`` copies at ``t_k / n_T``."""
        step = [AnalogBlock(b.duration / self.trotter_steps, b.sandwich) for b in self.blocks]
        return step * self.trotter_steps


@dataclass(frozen=True)
class SolveReport:
    residual: float
    negative_time_count: int
    total_analog_time: float
    error_bound: float
    analog_time_lower_bound: Optional[float] = None
    coupling_ratio: Optional[float] = None
    min_block_time: Optional[float] = None
    bang_metric: Optional[float] = None
    nonzero_blocks: int = 0


# ---------------------------------------------------------------------------
# linear solves

def _restrict(M, b):
    M = np.asarray(M, dtype=float)
    if isinstance(b, CouplingVector):
        rows = np.asarray(b.active_rows, dtype=int) - 1
        return M[rows], np.asarray(b.entries, dtype=float)
    b = np.asarray(b, dtype=float)
    return M, b


def solve_times(M, b) -> np.ndarray:
    """Exact block times for ``M t = b`` with no sign constraint.

    ``b`` may be a :class:`CouplingVector`, in which case only its active rows
    of ``M`` are used.  A square restricted system must be non-singular; a
    wide one (rows dropped for absent couplings) must have full row rank and
    yields the minimum-norm solution.
    """
    A, rhs = _restrict(M, b)
    if A.shape[0] != rhs.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {A.shape[0]} rows, rhs {rhs.shape[0]}")
    if A.shape[0] > A.shape[1]:
        raise ValueError(f"overdetermined system {A.shape}")
    if A.shape[0] == 0:
        return np.zeros(A.shape[1])
    if A.shape[0] == A.shape[1]:
        if not is_nonsingular(A):
            raise SingularSystemError(f"block-time matrix of size {A.shape[0]} is singular")
        t = np.linalg.solve(A, rhs)
    else:
        if not is_nonsingular(A @ A.T):
            raise SingularSystemError(f"restricted block-time matrix {A.shape} is rank deficient")
        t = np.linalg.lstsq(A, rhs, rcond=None)[0]
    resid = np.linalg.norm(A @ t - rhs)
    if resid > EXACT_RTOL * max(np.linalg.norm(rhs), 1e-300) and resid > 1e-12:
        raise SingularSystemError(f"exact solve residual {resid:.3e} too large")
    return t


def _protocol(n, protocol):
    if protocol == "general":
        M = build_protocol_matrix(n)
        return M.entries, M.column_gates
    if protocol == "zz":
        return zz_matrix(n), tuple(zz_protocol_selections(n))
    raise ValueError(f"unknown protocol {protocol!r}")


def build_exact_schedule(
    source: TwoBodyHamiltonian,
    target: TwoBodyHamiltonian,
    T: float,
    protocol: str = "general",
    trotter_steps: int = 1,
) -> Schedule:
    """Schedule from the square protocol system; refuses negative times.

    ``protocol`` is ``"general"`` (9 gate pairs per qubit pair) or ``"zz"``
    (X on both qubits of each pair; ZZ Hamiltonians only).
    """
    n = source.n
    b = ratio_vector(target, source, T, protocol=protocol)
    M, sels = _protocol(n, protocol)
    t = solve_times(M, b)
    threshold = ZERO_THRESHOLD * T
    negative = [(k + 1, float(v)) for k, v in enumerate(t) if v < -threshold]
    if negative:
        raise NegativeTimeError(negative)
    blocks = [AnalogBlock(float(v), sels[k]) for k, v in enumerate(t) if v >= threshold]
    return Schedule(n, source, tuple(blocks), trotter_steps, T)


def solve_positive_times(
    source: TwoBodyHamiltonian,
    target: TwoBodyHamiltonian,
    T: float,
    n: Optional[int] = None,
    protocol: str = "general",
    trotter_steps: int = 1,
    cap: int = POOL_CAP,
    tol: float = NNLS_TOL,
):
    """Non-negative block times over the full selection pool.

    Runs Lawson-Hanson NNLS on the ``4^n`` Pauli-selection columns (``2^n``
    X-only columns for ``protocol="zz"``).  Returns ``(schedule, report)``.
    Raises :class:`ResidualError` when the converged residual exceeds
    ``tol * max(1, ||b||)``.
    """
    n = source.n if n is None else n
    if n != source.n:
        raise ValueError(f"n = {n} does not match the source ({source.n} qubits)")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the selection-pool cap {cap}")
    b = ratio_vector(target, source, T, protocol=protocol)
    sels, cols = pool_matrix(n, protocol, cap=cap)
    A, rhs = _restrict(cols, b)
    if rhs.size == 0:
        t, resid = np.zeros(len(sels)), 0.0
    else:
        t, resid = nnls(A, rhs)
    if resid > tol * max(1.0, float(np.linalg.norm(rhs))):
        raise ResidualError(resid, tol * max(1.0, float(np.linalg.norm(rhs))))
    threshold = ZERO_THRESHOLD * T
    blocks = tuple(AnalogBlock(float(v), sels[k]) for k, v in enumerate(t) if v >= threshold)
    schedule = Schedule(n, source, blocks, trotter_steps, T)
    report = analog_time_diagnostics(schedule, target)
    return schedule, report


# ---------------------------------------------------------------------------
# schedule transforms and diagnostics

def trotterize(s: Schedule, n_T: int) -> Schedule:
    """Split every block into ``n_T`` pieces and repeat the sequence ``n_T`` times."""
    if n_T < 1:
        raise ValueError(f"n_T must be >= 1, got {n_T}")
    return replace(s, trotter_steps=s.trotter_steps * n_T)


def error_bound(s: Schedule) -> float:
    """Trotter remainder bound ``(2/n_T) (t_A ||H_S||)^2 exp((n_T+2)/n_T t_A ||H_S||)``."""
    if any(b.duration < 0 for b in s.blocks):
        raise ValueError("error bound requires non-negative durations")
    n_T = s.trotter_steps
    x = s.total_analog_time * hamiltonian_norm(s.source)
    if x == 0:
        return 0.0
    return 2.0 / n_T * x * x * math.exp((n_T + 2) / n_T * x)


def effective_couplings(s: Schedule) -> TwoBodyHamiltonian:
    """``sum_k t_k G_k H_S G_k``; equals ``T H_T`` for a correct schedule."""
    n = s.n
    keys = list(s.source.couplings)
    if not s.blocks:
        return TwoBodyHamiltonian(n, {})
    cols = selection_columns([b.sandwich for b in s.blocks], n)
    rows = np.array([global_index(*k, n) - 1 for k in keys], dtype=int)
    t = np.array([b.duration for b in s.blocks])
    h = np.array([s.source.couplings[k] for k in keys])
    eff = (cols[rows] @ t) * h
    return TwoBodyHamiltonian(n, dict(zip(keys, eff)))


def schedule_residual(s: Schedule, target: TwoBodyHamiltonian) -> float:
    """``||sum_k t_k column_k - T g/h||`` on the source's active rows."""
    if not s.source.couplings:
        return 0.0
    b = ratio_vector(target, s.source, s.T)
    keys = list(s.source.couplings)
    order = np.argsort([global_index(*k, s.n) for k in keys])
    eff = effective_couplings(s)
    got = np.array([eff.strength(*keys[o]) / s.source.couplings[keys[o]] for o in order])
    return float(np.linalg.norm(got - b.entries))


def analog_time_diagnostics(
    s: Schedule, target: TwoBodyHamiltonian, t_sqg: Optional[float] = None
) -> SolveReport:
    """Total analog time against its lower bound, coupling ratio and bang-rule metric."""
    durations = [b.duration for b in s.blocks]
    kept = [d for d in durations if d > 0]
    hs = hamiltonian_norm(s.source)
    lower = s.T * hamiltonian_norm(target) / hs if hs > 0 else math.inf
    active = [k for k in s.source.couplings]
    max_g = max((abs(target.strength(*k)) for k in active), default=0.0)
    min_h = min((abs(s.source.couplings[k]) for k in active), default=math.inf)
    min_t = min(kept) if kept else None
    negative = sum(d < 0 for d in durations)
    bound = error_bound(s) if negative == 0 else math.inf
    return SolveReport(
        residual=schedule_residual(s, target),
        negative_time_count=int(negative),
        total_analog_time=s.total_analog_time,
        error_bound=bound,
        analog_time_lower_bound=lower,
        coupling_ratio=max_g / min_h if active else None,
        min_block_time=min_t,
        bang_metric=(min_t / t_sqg) if (t_sqg and min_t is not None) else None,
        nonzero_blocks=len(kept),
    )


# ---------------------------------------------------------------------------
# file format

_SCHEDULE_FIELDS = {"format", "n", "trotter_steps", "T", "source_sha256", "blocks"}


def _num(x: float) -> str:
    return f"{float(x):.17g}"


def format_schedule(s: Schedule) -> str:
    head = [
        '{',
        '  "format": "daqc-schedule",',
        f'  "n": {s.n},',
        f'  "trotter_steps": {s.trotter_steps},',
        f'  "T": {_num(s.T)},',
        f'  "source_sha256": "{hamiltonian_digest(s.source)}",',
        '  "blocks": [',
    ]
    recs = [f'    {{"duration": {_num(b.duration)}, "gates": "{b.sandwich}"}}' for b in s.blocks]
    body = [",\n".join(recs)] if recs else []
    return "\n".join(head + body + ['  ]', '}']) + "\n"


def parse_schedule(text: str, source: TwoBodyHamiltonian) -> Schedule:
    """Parse a schedule file; ``source`` must match the recorded hash."""
    doc = json.loads(text)
    unknown = set(doc) - _SCHEDULE_FIELDS
    if unknown:
        raise ValueError(f"unknown schedule field(s): {sorted(unknown)}")
    if doc.get("format") != "daqc-schedule":
        raise ValueError("not a daqc schedule file")
    if doc["source_sha256"] != hamiltonian_digest(source):
        raise ValueError("schedule was compiled for a different source Hamiltonian")
    if doc["n"] != source.n:
        raise ValueError(f"schedule is for n = {doc['n']}, source has n = {source.n}")
    blocks = []
    for rec in doc["blocks"]:
        if set(rec) != {"duration", "gates"}:
            raise ValueError(f"malformed block record {rec!r}")
        blocks.append(AnalogBlock(float(rec["duration"]), rec["gates"]))
    return Schedule(doc["n"], source, tuple(blocks), int(doc["trotter_steps"]), float(doc["T"]))


def save_schedule(s: Schedule, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_schedule(s))


def load_schedule(path, source: TwoBodyHamiltonian) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        return parse_schedule(fh.read(), source)
