"""All-to-all ZZ Hamiltonians: the case where compilation is exact.

Every block commutes with every other, so one Trotter step already reproduces
the target up to rounding.
"""

import numpy as np

from daqc.hamiltonian import zz_all_to_all
from daqc.scheduler import solve_positive_times
from daqc.simulator import evolve, frobenius_distance, run_schedule

rng = np.random.default_rng(3)
source = zz_all_to_all(5, rng.uniform(0.5, 1.5, 10))
target = zz_all_to_all(5, rng.uniform(-1.0, 1.0, 10))

schedule, report = solve_positive_times(source, target, 1.0, protocol="zz")
for block in schedule.blocks:
    print(f"  {block.sandwich}  t = {block.duration:.4f}")
print("distance to exact evolution:", frobenius_distance(run_schedule(schedule), evolve(target, 1.0)))
