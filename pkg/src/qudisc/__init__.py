"""Multiple-shot discrimination of qubit unitary channels.

Closed-form discrimination quantities, rectangular discrimination
circuits over native gates, exact and noisy statevector simulation,
outcome classification, and experiment sweeps — exposed as a library,
an HTTP service (``qudisc.service``) and a CLI (``qudisc``).
"""

from .classify import (
    H0,
    H1,
    MajorityBits,
    OutcomeSets,
    Parity,
    SuccessEstimate,
    answer_swap_correction,
    classify,
    estimate_success,
    exact_success,
    majority_success_closed_form,
    majority_vote,
)
from .circuits import Circuit, circuit, concat, emit_qasm, inverse_circuit, parse_qasm
from .errors import QudiscError
from .experiments import (
    ExperimentConfig,
    ResultRow,
    SuboptimalResult,
    all_factorizations,
    derive_seed,
    noiseless_success,
    rows_to_csv,
    rows_to_json,
    run_experiment,
    run_suboptimal,
)
from .gates import Gate, gate_matrix
from .linalg import eigenphases_unitary, is_unitary, kron, kron_power
from .schemes import (
    SchemePlan,
    SchemeSpec,
    assemble_plan,
    assemble_scheme,
    build_entangler,
    build_measurement,
    build_suboptimal_column,
    collapse_processed_unitary,
    derive_pauli_corrections,
)
from .simulator import (
    DEFAULT_NOISE,
    NOISELESS,
    NoiseModel,
    OutcomeCounts,
    exact_distribution,
    run_statevector,
    sample_bitstrings,
    sample_counts,
)
from .theory import (
    DiscriminationReport,
    UnitaryPair,
    arc_function,
    discrimination_report,
    discriminator_state,
    example_pair,
    helstrom_pair_success,
    nu_min_modulus,
    numerical_range_min_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_NOISE",
    "NOISELESS",
    "Circuit",
    "DiscriminationReport",
    "ExperimentConfig",
    "Gate",
    "H0",
    "H1",
    "MajorityBits",
    "NoiseModel",
    "OutcomeCounts",
    "OutcomeSets",
    "Parity",
    "QudiscError",
    "ResultRow",
    "SchemePlan",
    "SchemeSpec",
    "SuboptimalResult",
    "SuccessEstimate",
    "UnitaryPair",
    "all_factorizations",
    "answer_swap_correction",
    "arc_function",
    "assemble_plan",
    "assemble_scheme",
    "build_entangler",
    "build_measurement",
    "build_suboptimal_column",
    "circuit",
    "classify",
    "collapse_processed_unitary",
    "concat",
    "derive_pauli_corrections",
    "derive_seed",
    "discrimination_report",
    "discriminator_state",
    "emit_qasm",
    "estimate_success",
    "exact_distribution",
    "exact_success",
    "example_pair",
    "gate_matrix",
    "eigenphases_unitary",
    "helstrom_pair_success",
    "inverse_circuit",
    "is_unitary",
    "kron",
    "kron_power",
    "majority_success_closed_form",
    "majority_vote",
    "noiseless_success",
    "nu_min_modulus",
    "numerical_range_min_bruteforce",
    "parse_qasm",
    "rows_to_csv",
    "rows_to_json",
    "run_experiment",
    "run_statevector",
    "run_suboptimal",
    "sample_bitstrings",
    "sample_counts",
]
