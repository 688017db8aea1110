"""Amplitude amplification and the unknown-solution-count search schedule.

The diffusion operator is emitted as H^n . (phase flip on |0...0>) . H^n over
the candidate register. With this convention the operator equals
``I - 2|s><s|`` (|s> the uniform state), i.e. amplitudes map to
``a_i - 2<a>``, the textbook inversion about average times a global -1.
All observable quantities (magnitudes, relative phases, probabilities) are
unaffected; tests compare exactly those.

``boyer_search`` implements the search loop of Boyer, Brassard, Hoyer and
Tapp (arXiv:quant-ph/9605034) for the case where the number of marked items
is unknown: grow a cutoff m by a factor 6/5 after every failed measurement,
draw the iteration count j uniformly below m, and cap m at sqrt(N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arithmetic import RegisterRef
from .statevector import (
    DEFAULT_QUBIT_CAP,
    GateSequence,
    IntegrityError,
    StateVector,
    apply_sequence,
    cphase_flip_zero,
    h,
    measure_all,
    new_zero_state,
    norm_squared,
    subspace_probability,
    x,
)

ANCILLA_TOLERANCE = 1e-12


@dataclass(frozen=True, slots=True)
class OracleCircuit:
    """Phase oracle split into compute / mark / uncompute stages.

    Applying prepare, mark, unprepare to |i>_q (ancillas |0>, kickback |->)
    yields (-1)^o(i) |i>_q with ancillas restored: the phase-kickback
    contract. ``unprepare`` must be the exact reverse of ``prepare``.
    """

    prepare: GateSequence
    mark: GateSequence
    unprepare: GateSequence
    q_register: RegisterRef
    kickback_qubit: int
    num_qubits: int

    def __post_init__(self) -> None:
        if self.unprepare.gates != self.prepare.reverse().gates:
            raise ValueError("unprepare is not the reverse of prepare")
        if not 0 <= self.kickback_qubit < self.num_qubits:
            raise ValueError("kickback qubit out of range")

    @property
    def ancilla_qubits(self) -> tuple[int, ...]:
        """Every qubit that is neither a candidate bit nor the kickback."""
        q_bits = set(self.q_register.bits)
        return tuple(
            q
            for q in range(self.num_qubits)
            if q not in q_bits and q != self.kickback_qubit
        )


@dataclass(slots=True)
class BoyerSchedule:
    """Mutable cutoff state for one unknown-count search.

    ``m`` starts at 1 and grows by ``lam`` (6/5 unless configured otherwise)
    after each failed measurement, never exceeding ``sqrt_n_cap``.
    """

    sqrt_n_cap: float
    rng: np.random.Generator
    m: float = 1.0
    lam: float = 6 / 5

    def draw_iterations(self) -> int:
        """Random integer j in [0, ceil(m))."""
        return int(self.rng.integers(0, math.ceil(self.m)))

    def grow(self) -> None:
        self.m = min(self.lam * self.m, self.sqrt_n_cap)


@dataclass(frozen=True, slots=True)
class BoyerStep:
    """One measurement of the schedule: cutoff, draw, outcome."""

    m: float
    j: int
    candidate: int
    passed: bool


@dataclass(frozen=True, slots=True)
class BoyerResult:
    found: int | None
    steps: tuple[BoyerStep, ...]
    iterations_applied: int

    @property
    def exhausted(self) -> bool:
        return self.found is None


def build_diffusion(q: RegisterRef) -> GateSequence:
    """Inversion about average over the q register (global phase -1)."""
    hs = [h(bit) for bit in q.bits]
    return GateSequence(hs) + [cphase_flip_zero(q.bits)] + hs


def iteration_count(n_items: int, n_solutions: int) -> int:
    """ceil((pi/4) * sqrt(N/M)) Grover iterations for M known solutions."""
    if n_items < 1:
        raise ValueError(f"need at least one item, got {n_items}")
    if n_solutions < 1:
        raise ValueError(
            f"solution count must be >= 1 (got {n_solutions}); "
            "use the unknown-count schedule when M is unknown"
        )
    if n_solutions > n_items:
        raise ValueError(f"M={n_solutions} exceeds N={n_items}")
    return math.ceil(math.pi / 4.0 * math.sqrt(n_items / n_solutions))


def prepare_search_state(
    oracle: OracleCircuit, *, qubit_cap: int | None = DEFAULT_QUBIT_CAP
) -> StateVector:
    """Zero state with the kickback qubit in |-> and q in uniform superposition."""
    state = new_zero_state(oracle.num_qubits, qubit_cap=qubit_cap)
    apply_sequence(
        state,
        GateSequence(
            [x(oracle.kickback_qubit), h(oracle.kickback_qubit)]
            + [h(bit) for bit in oracle.q_register.bits]
        ),
    )
    return state


def grover_iteration(
    state: StateVector, oracle: OracleCircuit, diffusion: GateSequence
) -> StateVector:
    """One oracle application (prepare, mark, unprepare) plus diffusion.

    Verifies that the uncompute stage returned every ancilla to |0>; more
    than 1e-12 probability mass on nonzero-ancilla states means a broken
    uncompute and raises IntegrityError.
    """
    apply_sequence(state, oracle.prepare)
    apply_sequence(state, oracle.mark)
    apply_sequence(state, oracle.unprepare)
    apply_sequence(state, diffusion)
    ancillas = oracle.ancilla_qubits
    if ancillas:
        contamination = norm_squared(state) - subspace_probability(state, ancillas, 0)
        if contamination > ANCILLA_TOLERANCE:
            raise IntegrityError(
                f"ancilla contamination {contamination:.3e} after uncompute"
            )
    return state


def boyer_search(
    oracle: OracleCircuit,
    classical_check: Callable[[int], bool],
    schedule: BoyerSchedule,
    max_steps: int,
    measure_rng: np.random.Generator,
    *,
    qubit_cap: int | None = DEFAULT_QUBIT_CAP,
) -> BoyerResult:
    """Search for a candidate passing ``classical_check`` with M unknown.

    Each step draws j below the cutoff, prepares the uniform superposition,
    applies j Grover iterations, measures the q register, and hands the
    outcome to ``classical_check``. Exhaustion after ``max_steps``
    measurements is a normal return, not an error.
    """
    diffusion = build_diffusion(oracle.q_register)
    q = oracle.q_register
    q_mask = (1 << q.width) - 1
    steps: list[BoyerStep] = []
    iterations = 0
    for _ in range(max_steps):
        m_now = schedule.m
        j = schedule.draw_iterations()
        state = prepare_search_state(oracle, qubit_cap=qubit_cap)
        for _ in range(j):
            grover_iteration(state, oracle, diffusion)
        iterations += j
        basis = measure_all(state, measure_rng)
        candidate = (basis >> q.offset) & q_mask
        passed = bool(classical_check(candidate))
        steps.append(BoyerStep(m=m_now, j=j, candidate=candidate, passed=passed))
        if passed:
            return BoyerResult(candidate, tuple(steps), iterations)
        schedule.grow()
    return BoyerResult(None, tuple(steps), iterations)
