"""Shallow circuits by optimization.

A Trotterized XY chain on cross-resonance hardware needs four analog blocks
per step. Optimizing arbitrary rotation layers (one for even qubits, one for
odd) around a fixed number of blocks does much better at the same depth.
Kept to four qubits so it runs in a few seconds.
"""

from daqc.hamiltonian import cross_resonance_chain, xy_chain
from daqc.optimizer import FREE, OptimizationConfig, optimize

n, T = 4, 0.6
source, target = cross_resonance_chain(n, 1.0), xy_chain(n, 1.0)

cfg = OptimizationConfig(runs=3, seed=1, gd_max_iters=300)
r4 = optimize(source, target, T, 4, cfg)
print(f"K=4 Trotter baseline {r4.baseline_cost:.3f} -> optimized {r4.best_cost:.3f} "
      f"({100 * r4.improvement:.0f}% better)")

# A single block with its duration free to move.
r1 = optimize(source, target, T, 1, OptimizationConfig(runs=3, seed=1, gd_max_iters=300, time_mode=FREE))
print(f"K=1 free time: {r1.best_cost:.3f}, block time {r1.best_circuit.block_times[0]:.3f}")
