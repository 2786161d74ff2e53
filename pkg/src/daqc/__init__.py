"""Digital-analog quantum circuit compilation, verification and optimization."""

from .exceptions import (
    DAQCError,
    NegativeTimeError,
    ResidualError,
    SingularSystemError,
    UnsimulableError,
)
from .hamiltonian import (
    TwoBodyHamiltonian,
    cross_resonance_chain,
    dense_matrix,
    hamiltonian_norm,
    load_hamiltonian,
    random_hamiltonian,
    ratio_vector,
    save_hamiltonian,
    xy_chain,
    zz_all_to_all,
)
from .nnls import nnls
from .optimizer import (
    LayeredCircuit,
    OptimizationConfig,
    OptimizationResult,
    RotationAngles,
    circuit_unitary,
    make_trotter_baseline,
    optimize,
    rotation_unitary,
    sample_inhomogeneous_source,
)
from .scheduler import (
    AnalogBlock,
    Schedule,
    build_exact_schedule,
    error_bound,
    load_schedule,
    save_schedule,
    solve_positive_times,
    trotterize,
)
from .signmatrix import build_protocol_matrix, build_protocol_matrix_recursive, zz_matrix
from .simulator import evolve, evolve_pairwise_trotter, frobenius_distance, run_schedule

__version__ = "0.1.0"

__all__ = [
    "AnalogBlock",
    "build_exact_schedule",
    "build_protocol_matrix",
    "build_protocol_matrix_recursive",
    "circuit_unitary",
    "cross_resonance_chain",
    "DAQCError",
    "dense_matrix",
    "error_bound",
    "evolve",
    "evolve_pairwise_trotter",
    "frobenius_distance",
    "hamiltonian_norm",
    "LayeredCircuit",
    "load_hamiltonian",
    "load_schedule",
    "make_trotter_baseline",
    "NegativeTimeError",
    "nnls",
    "OptimizationConfig",
    "OptimizationResult",
    "optimize",
    "random_hamiltonian",
    "ratio_vector",
    "ResidualError",
    "rotation_unitary",
    "RotationAngles",
    "run_schedule",
    "sample_inhomogeneous_source",
    "save_hamiltonian",
    "save_schedule",
    "Schedule",
    "SingularSystemError",
    "solve_positive_times",
    "trotterize",
    "TwoBodyHamiltonian",
    "UnsimulableError",
    "xy_chain",
    "zz_all_to_all",
    "zz_matrix",
]
