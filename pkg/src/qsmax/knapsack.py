"""0/1 knapsack as a quantum maximization problem.

Problem model, register planning, oracle compilation, the threshold-raising
maximization driver, classical brute-force references, and gate-level
resource estimation.

Register file (in qubit order): ``q`` candidate bits (item k is qubit k-1,
so item 1 is the least significant), ``w`` accumulated weight, ``g`` shared
scratch for loaded constants, ``f`` fitness in two's complement, ``v``
validity flag, ``r`` oracle kickback qubit.

Candidate bitstrings in this module's public surface are
most-significant-item-first: string position 0 is item 1, e.g. "0111" means
items 2, 3 and 4 are packed. Internally item k maps to q-register bit k-1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .arithmetic import (
    RegisterRef,
    SignedEncoding,
    build_comparator,
    build_controlled_modular_adder,
    build_controlled_negate,
    build_load_constant,
    build_signed_comparator,
)
from .grover import (
    BoyerSchedule,
    OracleCircuit,
    boyer_search,
    build_diffusion,
    iteration_count,
)
from .statevector import (
    DEFAULT_QUBIT_CAP,
    CapacityError,
    GateKind,
    GateSequence,
    apply_sequence,
    get_amplitude,
    h,
    measure_all,
    new_basis_state,
    norm_squared,
    x,
)

MAX_ITEMS = 12

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, slots=True)
class KnapsackInstance:
    """Item list (weight, value) plus a weight capacity, all unsigned ints."""

    items: tuple[tuple[int, int], ...]
    capacity: int

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "items", tuple((int(w), int(v)) for w, v in self.items)
        )
        if not 1 <= len(self.items) <= MAX_ITEMS:
            raise ValueError(
                f"item count {len(self.items)} outside [1, {MAX_ITEMS}]"
            )
        if any(w < 0 or v < 0 for w, v in self.items):
            raise ValueError("weights and values must be >= 0")
        if self.capacity < 0:
            raise ValueError("capacity must be >= 0")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(w for w, _ in self.items)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.items)


@dataclass(frozen=True, slots=True)
class RegisterPlan:
    """Disjoint contiguous qubit ranges for one instance."""

    q: RegisterRef
    w: RegisterRef
    g: RegisterRef
    f: RegisterRef
    v: int
    r: int
    total_qubits: int

    @property
    def fitness_encoding(self) -> SignedEncoding:
        return SignedEncoding(self.f.width)


@dataclass(frozen=True, slots=True)
class CandidateEvaluation:
    """Weight/fitness/validity of one candidate; fitness is pre-negation."""

    candidate: str
    weight: int
    fitness: int
    valid: bool


@dataclass(frozen=True, slots=True)
class TraceStep:
    """One measurement of the maximization run."""

    round: int
    m: float
    j: int
    grover_iterations_cumulative: int
    measured_candidate: str
    measured_fitness: int
    valid: bool
    accepted: bool
    threshold_after: int


@dataclass(frozen=True, slots=True)
class SearchTrace:
    """Audit record of a maximization run."""

    steps: tuple[TraceStep, ...]
    final_candidate: str | None
    final_fitness: int
    initial_threshold: int
    initial_candidate: str | None
    rounds: int
    total_grover_iterations: int
    total_qubits: int


@dataclass(frozen=True, slots=True)
class ResourceEstimate:
    """Gate-level cost of one full oracle application plus diffusion."""

    qubits: int
    gate_counts: dict[str, int]
    toffoli_equivalent: int
    grover_iterations_expected: int


@dataclass(frozen=True, slots=True)
class VerifyReport:
    """Outcome of the quantum-vs-classical agreement suite."""

    ok: bool
    candidates_checked: int
    thresholds_checked: tuple[int, ...]
    mismatch: str | None = None


def candidate_to_index(candidate: str, n: int) -> int:
    """Candidate bitstring (item 1 first) to q-register basis value."""
    if len(candidate) != n or any(ch not in "01" for ch in candidate):
        raise ValueError(f"candidate {candidate!r} is not a {n}-bit 0/1 string")
    return sum(1 << k for k, ch in enumerate(candidate) if ch == "1")


def index_to_candidate(index: int, n: int) -> str:
    """q-register basis value to candidate bitstring (item 1 first)."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"candidate index {index} out of range for {n} items")
    return "".join(str((index >> k) & 1) for k in range(n))


def all_candidates(n: int) -> list[str]:
    """All candidate strings in table order (string read as a binary number)."""
    return [format(d, f"0{n}b") for d in range(1 << n)]


def plan_registers(
    instance: KnapsackInstance, *, qubit_cap: int | None = DEFAULT_QUBIT_CAP
) -> RegisterPlan:
    """Size and place the q/w/g/f/v/r registers for an instance.

    Widths: w holds the sum of all weights; f holds the sum of all values in
    two's complement (so one extra sign bit); g is scratch wide enough for
    either constant. Degenerate sums floor at width 1 (w) and 2 (f).
    """
    n = instance.n
    w_width = max(1, sum(instance.weights).bit_length())
    f_width = max(2, sum(instance.values).bit_length() + 1)
    g_width = max(w_width, f_width)

    offset = 0
    q = RegisterRef("q", offset, n)
    offset += n
    w = RegisterRef("w", offset, w_width)
    offset += w_width
    g = RegisterRef("g", offset, g_width)
    offset += g_width
    f = RegisterRef("f", offset, f_width)
    offset += f_width
    v = offset
    r = offset + 1
    total = offset + 2

    if qubit_cap is not None and total > qubit_cap:
        raise CapacityError(
            f"instance needs {total} qubits "
            f"(q={n}, w={w_width}, g={g_width}, f={f_width}, v=1, r=1) "
            f"but the cap is {qubit_cap}"
        )
    return RegisterPlan(q=q, w=w, g=g, f=f, v=v, r=r, total_qubits=total)


def classical_evaluate(instance: KnapsackInstance, candidate: str) -> CandidateEvaluation:
    """Brute-force reference: sum selected weights/values, check capacity."""
    index = candidate_to_index(candidate, instance.n)
    weight = sum(w for k, (w, _) in enumerate(instance.items) if (index >> k) & 1)
    fitness = sum(v for k, (_, v) in enumerate(instance.items) if (index >> k) & 1)
    return CandidateEvaluation(
        candidate=candidate,
        weight=weight,
        fitness=fitness,
        valid=weight <= instance.capacity,
    )


def classical_max(instance: KnapsackInstance) -> CandidateEvaluation:
    """Best valid candidate by brute force.

    Ties break toward the smallest candidate in table order (the empty
    selection is always valid, so a best candidate always exists).
    """
    best: CandidateEvaluation | None = None
    for candidate in all_candidates(instance.n):
        ev = classical_evaluate(instance, candidate)
        if ev.valid and (best is None or ev.fitness > best.fitness):
            best = ev
    assert best is not None
    return best


def compile_oracle(
    instance: KnapsackInstance, plan: RegisterPlan, threshold: int
) -> OracleCircuit:
    """Compile the phase oracle marking valid candidates with fitness > threshold.

    prepare: per item, load its weight into g and add into w under the item
    qubit, then likewise values into f; compare the capacity (loaded in g)
    against w into v; negate f where v is set so invalid candidates turn
    negative. mark: load the threshold into g and flip the kickback qubit
    where threshold < f under signed comparison. unprepare: exact reverse of
    prepare.
    """
    enc = plan.fitness_encoding
    if not enc.min_value <= threshold <= enc.max_value:
        raise ValueError(
            f"threshold {threshold} not representable in {plan.f.width}-bit "
            f"two's complement [{enc.min_value}, {enc.max_value}]"
        )
    g_w = plan.g.slice(plan.w.width)
    g_f = plan.g.slice(plan.f.width)

    prepare = GateSequence()
    for k, (weight, _) in enumerate(instance.items):
        load = build_load_constant(weight, g_w)
        prepare = prepare + load
        prepare = prepare + build_controlled_modular_adder(plan.q.bit(k), g_w, plan.w)
        prepare = prepare + load
    for k, (_, value) in enumerate(instance.items):
        load = build_load_constant(value, g_f)
        prepare = prepare + load
        prepare = prepare + build_controlled_modular_adder(plan.q.bit(k), g_f, plan.f)
        prepare = prepare + load
    # Capacities beyond the register range compare identically to the largest
    # representable weight (every weight fits in w), so clamp.
    capacity = min(instance.capacity, (1 << plan.w.width) - 1)
    load_cap = build_load_constant(capacity, g_w)
    prepare = prepare + load_cap
    prepare = prepare + build_comparator(g_w, plan.w, plan.v)  # v ^= capacity < weight
    prepare = prepare + load_cap
    prepare = prepare + build_controlled_negate(plan.v, plan.f)

    load_threshold = build_load_constant(enc.encode(threshold), g_f)
    mark = (
        load_threshold
        + build_signed_comparator(g_f, plan.f, plan.r)  # r ^= threshold < fitness
        + load_threshold
    )

    return OracleCircuit(
        prepare=prepare,
        mark=mark,
        unprepare=prepare.reverse(),
        q_register=plan.q,
        kickback_qubit=plan.r,
        num_qubits=plan.total_qubits,
    )


def enumerate_table(
    instance: KnapsackInstance, *, qubit_cap: int | None = DEFAULT_QUBIT_CAP
) -> list[CandidateEvaluation]:
    """Evaluate every candidate through the quantum path.

    Prepares each basis state, runs the oracle's compute stage, and reads the
    w/f/v registers back off the single surviving basis index. Reported
    fitness is pre-negation (the circuit stores the negated fitness for
    invalid candidates).
    """
    plan = plan_registers(instance, qubit_cap=qubit_cap)
    prepare = compile_oracle(instance, plan, 0).prepare
    enc = plan.fitness_encoding
    rng = np.random.default_rng(0)  # measurement is deterministic on basis states
    rows: list[CandidateEvaluation] = []
    for candidate in all_candidates(instance.n):
        q_value = candidate_to_index(candidate, instance.n)
        state = new_basis_state(
            plan.total_qubits, q_value << plan.q.offset, qubit_cap=qubit_cap
        )
        apply_sequence(state, prepare)
        basis = measure_all(state, rng)
        weight = plan.w.value_of(basis)
        stored_fitness = enc.decode(plan.f.value_of(basis))
        invalid = (basis >> plan.v) & 1
        rows.append(
            CandidateEvaluation(
                candidate=candidate,
                weight=weight,
                fitness=-stored_fitness if invalid else stored_fitness,
                valid=not invalid,
            )
        )
    return rows


def verify_instance(
    instance: KnapsackInstance,
    *,
    qubit_cap: int | None = DEFAULT_QUBIT_CAP,
    num_thresholds: int = 5,
    threshold_seed: int = 2024,
) -> VerifyReport:
    """Quantum/classical agreement suite for one instance.

    Checks the circuit-computed table against ``classical_evaluate`` for all
    candidates, then the oracle's kickback phase against the classical
    predicate (valid and fitness strictly above threshold) at
    ``num_thresholds`` sampled thresholds.
    """
    plan = plan_registers(instance, qubit_cap=qubit_cap)
    n = instance.n
    classical_rows = [classical_evaluate(instance, c) for c in all_candidates(n)]

    for quantum, classical in zip(enumerate_table(instance, qubit_cap=qubit_cap), classical_rows):
        if quantum != classical:
            return VerifyReport(
                ok=False,
                candidates_checked=1 << n,
                thresholds_checked=(),
                mismatch=(
                    f"candidate {classical.candidate}: circuit computed "
                    f"(weight={quantum.weight}, fitness={quantum.fitness}, "
                    f"valid={quantum.valid}), classical reference "
                    f"(weight={classical.weight}, fitness={classical.fitness}, "
                    f"valid={classical.valid})"
                ),
            )

    rng = np.random.default_rng(threshold_seed)
    max_threshold = sum(instance.values)
    thresholds = tuple(
        int(t) for t in rng.integers(0, max_threshold + 1, size=num_thresholds)
    )
    kick = plan.r
    for threshold in thresholds:
        oracle = compile_oracle(instance, plan, threshold)
        for classical in classical_rows:
            q_value = candidate_to_index(classical.candidate, n)
            state = new_basis_state(
                plan.total_qubits, q_value << plan.q.offset, qubit_cap=qubit_cap
            )
            apply_sequence(state, GateSequence([x(kick), h(kick)]))
            apply_sequence(state, oracle.prepare)
            apply_sequence(state, oracle.mark)
            apply_sequence(state, oracle.unprepare)
            marked = classical.valid and classical.fitness > threshold
            sign = -1.0 if marked else 1.0
            base = q_value << plan.q.offset
            amp0 = get_amplitude(state, base)
            amp1 = get_amplitude(state, base | (1 << kick))
            stray = norm_squared(state) - (abs(amp0) ** 2 + abs(amp1) ** 2)
            if (
                abs(amp0 - sign / _SQRT2) > 1e-10
                or abs(amp1 + sign / _SQRT2) > 1e-10
                or stray > 1e-12
            ):
                return VerifyReport(
                    ok=False,
                    candidates_checked=1 << n,
                    thresholds_checked=thresholds,
                    mismatch=(
                        f"candidate {classical.candidate} at threshold {threshold}: "
                        f"kickback phase disagrees with the classical predicate "
                        f"(marked={marked}, amp0={amp0:.6f}, amp1={amp1:.6f}, "
                        f"stray={stray:.2e})"
                    ),
                )
    return VerifyReport(
        ok=True,
        candidates_checked=1 << n,
        thresholds_checked=thresholds,
        mismatch=None,
    )


def maximize(
    instance: KnapsackInstance,
    *,
    seed: int = 0,
    max_rounds: int = 100,
    initial_threshold: int | None = None,
    confirmation_count: int = 1,
    qubit_cap: int | None = DEFAULT_QUBIT_CAP,
    max_steps_per_round: int | None = None,
    growth: float = 6 / 5,
) -> SearchTrace:
    """Find the maximum-fitness valid candidate by threshold-raising search.

    Each round compiles the oracle at the current threshold and runs the
    unknown-count search; a found candidate raises the threshold to its
    fitness. ``confirmation_count`` consecutive exhausted rounds (default 1)
    end the run. The seed fully determines the run: it spawns independent
    streams for the initial threshold draw, the schedule's j draws, and
    measurement sampling.
    """
    if confirmation_count < 1:
        raise ValueError("confirmation_count must be >= 1")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    plan = plan_registers(instance, qubit_cap=qubit_cap)
    n = instance.n
    big_n = 1 << n
    enc = plan.fitness_encoding
    init_rng, schedule_rng, measure_rng = [
        np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)
    ]

    zero_candidate = "0" * n
    if initial_threshold is not None:
        if not enc.min_value <= initial_threshold <= enc.max_value:
            raise ValueError(
                f"initial threshold {initial_threshold} not representable "
                f"in {plan.f.width} signed bits"
            )
        threshold = initial_threshold
        initial_candidate: str | None = None
        best_candidate: str | None = None
    else:
        # Fitness of one uniformly drawn candidate if valid, else 0 (the
        # empty selection): guarantees an achievable starting threshold.
        drawn = index_to_candidate(int(init_rng.integers(0, big_n)), n)
        ev = classical_evaluate(instance, drawn)
        if ev.valid:
            threshold, initial_candidate = ev.fitness, drawn
        else:
            threshold, initial_candidate = 0, zero_candidate
        best_candidate = initial_candidate

    if max_steps_per_round is None:
        max_steps_per_round = 3 * math.ceil(math.sqrt(big_n))

    starting_threshold = threshold
    steps: list[TraceStep] = []
    cumulative_j = 0
    rounds = 0
    consecutive_exhausted = 0
    while rounds < max_rounds and consecutive_exhausted < confirmation_count:
        rounds += 1
        oracle = compile_oracle(instance, plan, threshold)
        current = threshold

        def check(candidate_index: int, t: int = current) -> bool:
            ev = classical_evaluate(instance, index_to_candidate(candidate_index, n))
            return ev.valid and ev.fitness > t

        schedule = BoyerSchedule(
            sqrt_n_cap=math.sqrt(big_n), rng=schedule_rng, lam=growth
        )
        result = boyer_search(
            oracle,
            check,
            schedule,
            max_steps_per_round,
            measure_rng,
            qubit_cap=qubit_cap,
        )
        for step in result.steps:
            cumulative_j += step.j
            candidate = index_to_candidate(step.candidate, n)
            ev = classical_evaluate(instance, candidate)
            new_threshold = ev.fitness if step.passed else threshold
            steps.append(
                TraceStep(
                    round=rounds,
                    m=step.m,
                    j=step.j,
                    grover_iterations_cumulative=cumulative_j,
                    measured_candidate=candidate,
                    measured_fitness=ev.fitness,
                    valid=ev.valid,
                    accepted=step.passed,
                    threshold_after=new_threshold,
                )
            )
            if step.passed:
                threshold = new_threshold
                best_candidate = candidate
        if result.found is None:
            consecutive_exhausted += 1
        else:
            consecutive_exhausted = 0

    return SearchTrace(
        steps=tuple(steps),
        final_candidate=best_candidate,
        final_fitness=threshold,
        initial_threshold=starting_threshold,
        initial_candidate=initial_candidate,
        rounds=rounds,
        total_grover_iterations=cumulative_j,
        total_qubits=plan.total_qubits,
    )


def _toffoli_equivalents(kind: GateKind, gate_qubits: int, controls: int) -> int:
    """Documented accounting: TOFFOLI and PERES (either direction) count 1;
    MCX with k controls counts 2(k-1)-1; the m-operand zero-subspace phase
    flip counts like an MCX with m-1 controls; X/H/CNOT count 0."""
    if kind in (GateKind.TOFFOLI, GateKind.PERES, GateKind.PERES_INV):
        return 1
    if kind is GateKind.MCX:
        return max(2 * (controls - 1) - 1, 0)
    if kind is GateKind.CPHASE_FLIP_ZERO:
        return max(2 * (gate_qubits - 2) - 1, 0)
    return 0


def estimate_resources(instance: KnapsackInstance) -> ResourceEstimate:
    """Count gates in one full oracle (threshold 0) plus diffusion.

    Purely symbolic: no simulation, no qubit cap. Constant loads depend on
    the loaded value's popcount, so the X count is reported for threshold 0.
    """
    plan = plan_registers(instance, qubit_cap=None)
    oracle = compile_oracle(instance, plan, 0)
    diffusion = build_diffusion(plan.q)
    counts: Counter[str] = Counter()
    toffoli_equivalent = 0
    for sequence in (oracle.prepare, oracle.mark, oracle.unprepare, diffusion):
        for gate in sequence:
            counts[gate.kind.value] += 1
            toffoli_equivalent += _toffoli_equivalents(
                gate.kind, len(gate.qubits), len(gate.controls)
            )
    return ResourceEstimate(
        qubits=plan.total_qubits,
        gate_counts=dict(counts),
        toffoli_equivalent=toffoli_equivalent,
        grover_iterations_expected=iteration_count(1 << instance.n, 1),
    )
