"""Command-line front end: solve / verify / table / estimate.

Instance file grammar (line oriented, ``#`` starts a comment):

    capacity <uint>          exactly once
    item <weight> <value>    one line per item, in item order

Exit codes: 0 success, 1 parse or I/O error, 2 simulator capacity exceeded,
3 quantum/classical verification mismatch.

Candidate bitstrings are printed most-significant-item-first (item 1 is the
leftmost character). Machine-format output is line-oriented ``key=value``
pairs, deterministic byte-for-byte for a given instance file and seed; the
human format adds a wall-time line.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .knapsack import (
    KnapsackInstance,
    SearchTrace,
    classical_max,
    enumerate_table,
    estimate_resources,
    maximize,
    verify_instance,
)
from .statevector import DEFAULT_QUBIT_CAP, CapacityError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CAPACITY = 2
EXIT_MISMATCH = 3

_GATE_KIND_ORDER = (
    "X",
    "H",
    "CNOT",
    "TOFFOLI",
    "PERES",
    "PERES_INV",
    "MCX",
    "CPHASE_FLIP_ZERO",
)


class InstanceParseError(Exception):
    """Malformed instance file; the message names the offending line."""


@dataclass(frozen=True, slots=True)
class RunConfig:
    """Everything that determines a solve run besides the instance itself."""

    seed: int = 0
    max_rounds: int = 100
    initial_threshold: int | None = None
    confirmation_count: int = 1
    output_format: str = "human"
    qubit_cap: int = DEFAULT_QUBIT_CAP


def parse_instance(path: str) -> KnapsackInstance:
    """Parse an instance file; errors carry the line number."""
    capacity: int | None = None
    items: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "capacity":
                if capacity is not None:
                    raise InstanceParseError(f"line {lineno}: duplicate capacity")
                if len(fields) != 2:
                    raise InstanceParseError(
                        f"line {lineno}: expected 'capacity <uint>', got {line!r}"
                    )
                capacity = _parse_uint(fields, 1, lineno, "capacity")
            elif fields[0] == "item":
                if len(fields) != 3:
                    raise InstanceParseError(
                        f"line {lineno}: expected 'item <weight> <value>', got {line!r}"
                    )
                weight = _parse_uint(fields, 1, lineno, "item weight")
                value = _parse_uint(fields, 2, lineno, "item value")
                items.append((weight, value))
            else:
                raise InstanceParseError(
                    f"line {lineno}: unknown directive {fields[0]!r}"
                )
    if capacity is None:
        raise InstanceParseError("missing capacity line")
    if not items:
        raise InstanceParseError("no item lines")
    try:
        return KnapsackInstance(tuple(items), capacity)
    except ValueError as err:
        raise InstanceParseError(str(err)) from None


def _parse_uint(fields: list[str], position: int, lineno: int, what: str) -> int:
    if position >= len(fields):
        raise InstanceParseError(f"line {lineno}: missing {what}")
    try:
        value = int(fields[position])
    except ValueError:
        raise InstanceParseError(
            f"line {lineno}: {what} must be an unsigned integer, "
            f"got {fields[position]!r}"
        ) from None
    if value < 0:
        raise InstanceParseError(f"line {lineno}: {what} must be >= 0")
    return value


def _emit_machine(trace: SearchTrace, config: RunConfig, out) -> None:
    print(
        f"seed={config.seed} qubits={trace.total_qubits} "
        f"initial_threshold={trace.initial_threshold} "
        f"initial_candidate={trace.initial_candidate or '-'}",
        file=out,
    )
    for s in trace.steps:
        print(
            f"round={s.round} m={s.m:.6f} j={s.j} "
            f"grover_iterations_cumulative={s.grover_iterations_cumulative} "
            f"measured_candidate={s.measured_candidate} "
            f"measured_fitness={s.measured_fitness} "
            f"valid={int(s.valid)} accepted={int(s.accepted)} "
            f"threshold_after={s.threshold_after}",
            file=out,
        )
    print(
        f"final_candidate={trace.final_candidate or '-'} "
        f"final_fitness={trace.final_fitness} rounds={trace.rounds} "
        f"total_grover_iterations={trace.total_grover_iterations}",
        file=out,
    )


def _emit_human(trace: SearchTrace, elapsed: float, out) -> None:
    print(
        f"search over {trace.total_qubits} qubits, "
        f"initial threshold {trace.initial_threshold}"
        + (
            f" (from candidate {trace.initial_candidate})"
            if trace.initial_candidate
            else ""
        ),
        file=out,
    )
    for s in trace.steps:
        verdict = "accepted" if s.accepted else "rejected"
        validity = "valid" if s.valid else "invalid"
        print(
            f"round {s.round:2d}  m={s.m:6.2f}  j={s.j}  "
            f"measured {s.measured_candidate}  fitness {s.measured_fitness:4d}  "
            f"{validity:7s}  {verdict:8s}  threshold {s.threshold_after}",
            file=out,
        )
    print(
        f"result: candidate {trace.final_candidate or '-'}  "
        f"fitness {trace.final_fitness}  rounds {trace.rounds}  "
        f"grover iterations {trace.total_grover_iterations}  "
        f"time {elapsed:.2f}s",
        file=out,
    )


def cmd_solve(path: str, config: RunConfig, out=None) -> int:
    """Run the maximization and emit the trace."""
    out = out or sys.stdout
    instance = parse_instance(path)
    start = time.perf_counter()
    trace = maximize(
        instance,
        seed=config.seed,
        max_rounds=config.max_rounds,
        initial_threshold=config.initial_threshold,
        confirmation_count=config.confirmation_count,
        qubit_cap=config.qubit_cap,
    )
    elapsed = time.perf_counter() - start
    if config.output_format == "machine":
        _emit_machine(trace, config, out)
    else:
        _emit_human(trace, elapsed, out)
    return EXIT_OK


def cmd_verify(path: str, qubit_cap: int = DEFAULT_QUBIT_CAP, out=None) -> int:
    """Run the quantum/classical agreement suite on one instance."""
    out = out or sys.stdout
    instance = parse_instance(path)
    report = verify_instance(instance, qubit_cap=qubit_cap)
    if report.ok:
        print(f"OK ({report.candidates_checked} candidates checked)", file=out)
        return EXIT_OK
    print(f"MISMATCH: {report.mismatch}", file=out)
    return EXIT_MISMATCH


def cmd_table(path: str, out=None) -> int:
    """Print every candidate's fitness/weight/validity, best row starred."""
    out = out or sys.stdout
    instance = parse_instance(path)
    rows = enumerate_table(instance)
    best = classical_max(instance)
    print("candidate  fitness  weight  validity", file=out)
    for row in rows:
        marker = "  *" if row.candidate == best.candidate else ""
        print(
            f"{row.candidate:>9s}  {row.fitness:7d}  {row.weight:6d}  "
            f"{'valid' if row.valid else 'invalid'}{marker}",
            file=out,
        )
    return EXIT_OK


def cmd_estimate(path: str, out=None) -> int:
    """Print the gate-level cost of one oracle application plus diffusion."""
    out = out or sys.stdout
    instance = parse_instance(path)
    estimate = estimate_resources(instance)
    print(f"qubits: {estimate.qubits}", file=out)
    print("gate_counts:", file=out)
    for kind in _GATE_KIND_ORDER:
        if kind in estimate.gate_counts:
            print(f"  {kind}: {estimate.gate_counts[kind]}", file=out)
    print(f"toffoli_equivalent: {estimate.toffoli_equivalent}", file=out)
    print(f"grover_iterations_m1: {estimate.grover_iterations_expected}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsmax",
        description=(
            "Maximize 0/1 knapsack value with iterative Grover search "
            "on a statevector simulator."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the maximization search")
    solve.add_argument("instance", help="instance file path")
    solve.add_argument("--seed", type=int, default=0, help="run seed (default 0)")
    solve.add_argument("--max-rounds", type=int, default=100)
    solve.add_argument(
        "--initial-threshold",
        type=int,
        default=None,
        help="override the randomly drawn starting threshold",
    )
    solve.add_argument(
        "--confirmations",
        type=int,
        default=1,
        help="consecutive exhausted rounds required to stop (default 1)",
    )
    solve.add_argument("--format", choices=("human", "machine"), default="human")
    solve.add_argument("--qubit-cap", type=int, default=DEFAULT_QUBIT_CAP)

    verify = sub.add_parser("verify", help="cross-check the oracle against brute force")
    verify.add_argument("instance")
    verify.add_argument("--qubit-cap", type=int, default=DEFAULT_QUBIT_CAP)

    table = sub.add_parser("table", help="print all candidate evaluations")
    table.add_argument("instance")

    estimate = sub.add_parser("estimate", help="print gate and qubit counts")
    estimate.add_argument("instance")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            config = RunConfig(
                seed=args.seed,
                max_rounds=args.max_rounds,
                initial_threshold=args.initial_threshold,
                confirmation_count=args.confirmations,
                output_format=args.format,
                qubit_cap=args.qubit_cap,
            )
            return cmd_solve(args.instance, config)
        if args.command == "verify":
            return cmd_verify(args.instance, qubit_cap=args.qubit_cap)
        if args.command == "table":
            return cmd_table(args.instance)
        if args.command == "estimate":
            return cmd_estimate(args.instance)
        raise AssertionError(f"unhandled command {args.command!r}")
    except CapacityError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InstanceParseError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
