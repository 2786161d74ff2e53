"""The protocol sign matrix.

Each analog block is sandwiched by a layer of Pauli gates. Conjugation by a
Pauli flips the sign of some two-body couplings, and the sign matrix M(n)
records those flips: column k holds the signs block k contributes to every
coupling, row by row.
"""

import numpy as np

from daqc import signmatrix as sm

# Two qubits: nine couplings (xx, xy, ..., zz) and nine sandwiches.
M2 = sm.build_protocol_matrix(2)
print("M(2) columns:", M2.column_gates)
print(M2.entries)

# Larger n are assembled from four 9x9 sub-blocks.
print("\nblock layout of M(4):")
for row in sm.protocol_layout(4):
    print("  " + " ".join(f"{k:>3}" for k in row))

# Exact integer rank tells us whether times can be solved for.
for n in range(2, 8):
    print(f"n={n}: ZZ matrix rank {sm.exact_rank(sm.zz_matrix(n))} of {sm.num_pairs(n)}")

# Summing every possible sandwich column cancels out exactly.
cols = sm.selection_columns(list(sm.iter_pool(3)), 3).astype(np.int64)
print("\nsum of all 64 columns for n=3 is zero:", not cols.sum(axis=1).any())
