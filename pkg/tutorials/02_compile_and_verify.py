"""Compile a target Hamiltonian onto a source Hamiltonian and check the result.

The exact square solve can return negative block times, which no hardware
can run. Solving over the full pool of sandwiches with non-negative least
squares always gives an implementable schedule.
"""

import numpy as np

from daqc.exceptions import NegativeTimeError
from daqc.hamiltonian import random_hamiltonian
from daqc.scheduler import build_exact_schedule, error_bound, solve_positive_times, trotterize
from daqc.simulator import evolve, frobenius_distance, run_schedule

rng = np.random.default_rng(0)
source, target = random_hamiltonian(3, rng), random_hamiltonian(3, rng)
T = 0.05

try:
    build_exact_schedule(source, target, T)
except NegativeTimeError as err:
    print("exact solve:", str(err)[:90], "...")

schedule, report = solve_positive_times(source, target, T)
print(f"\nnon-negative schedule: {report.nonzero_blocks} blocks, residual {report.residual:.1e}")
print(f"total analog time {report.total_analog_time:.4f} (lower bound {report.analog_time_lower_bound:.4f})")

# Repeating the block sequence n_T times shrinks the Trotter error roughly as 1/n_T.
reference = evolve(target, T)
print("\n n_T   distance      bound")
for n_T in (1, 2, 4, 8, 16):
    s = trotterize(schedule, n_T)
    print(f"{n_T:4d}  {frobenius_distance(run_schedule(s), reference):.3e}  {error_bound(s):.3e}")
