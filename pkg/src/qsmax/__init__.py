"""Function maximization with iterative Grover search over reversible-arithmetic
oracles, demonstrated on the 0/1 knapsack problem.

The package splits into five modules: ``statevector`` (the simulation
substrate), ``arithmetic`` (reversible integer circuits), ``grover``
(amplitude amplification and the unknown-count schedule), ``knapsack``
(problem model, oracle compiler, maximization driver, brute-force
cross-checks), and ``cli`` (the command-line front end).
"""

from .arithmetic import (
    RegisterRef,
    SignedEncoding,
    build_adder,
    build_comparator,
    build_controlled_adder,
    build_controlled_modular_adder,
    build_controlled_negate,
    build_load_constant,
    build_modular_adder,
    build_signed_comparator,
    build_subtractor,
)
from .grover import (
    BoyerResult,
    BoyerSchedule,
    BoyerStep,
    OracleCircuit,
    boyer_search,
    build_diffusion,
    grover_iteration,
    iteration_count,
    prepare_search_state,
)
from .knapsack import (
    CandidateEvaluation,
    KnapsackInstance,
    RegisterPlan,
    ResourceEstimate,
    SearchTrace,
    TraceStep,
    VerifyReport,
    classical_evaluate,
    classical_max,
    compile_oracle,
    enumerate_table,
    estimate_resources,
    maximize,
    plan_registers,
    verify_instance,
)
from .statevector import (
    DEFAULT_QUBIT_CAP,
    CapacityError,
    Gate,
    GateKind,
    GateSequence,
    IntegrityError,
    StateVector,
    apply_gate,
    apply_sequence,
    from_amplitudes,
    get_amplitude,
    measure_all,
    new_basis_state,
    new_zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_QUBIT_CAP",
    "BoyerResult",
    "BoyerSchedule",
    "BoyerStep",
    "CandidateEvaluation",
    "CapacityError",
    "Gate",
    "GateKind",
    "GateSequence",
    "IntegrityError",
    "KnapsackInstance",
    "OracleCircuit",
    "RegisterPlan",
    "RegisterRef",
    "ResourceEstimate",
    "SearchTrace",
    "SignedEncoding",
    "StateVector",
    "TraceStep",
    "VerifyReport",
    "apply_gate",
    "apply_sequence",
    "boyer_search",
    "build_adder",
    "build_comparator",
    "build_controlled_adder",
    "build_controlled_modular_adder",
    "build_controlled_negate",
    "build_diffusion",
    "build_load_constant",
    "build_modular_adder",
    "build_signed_comparator",
    "build_subtractor",
    "classical_evaluate",
    "classical_max",
    "compile_oracle",
    "enumerate_table",
    "estimate_resources",
    "from_amplitudes",
    "get_amplitude",
    "grover_iteration",
    "iteration_count",
    "maximize",
    "measure_all",
    "new_basis_state",
    "new_zero_state",
    "plan_registers",
    "prepare_search_state",
    "verify_instance",
]
