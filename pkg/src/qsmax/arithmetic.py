"""Builders for reversible integer arithmetic over register ranges.

Encoding: registers are little-endian bit vectors, ``A = sum_i a_i * 2**i``
with bit 0 the least significant. Signed values use two's complement; the
most significant bit is the sign (0 = '+', 1 = '-').

The in-place adder is the ancilla-free ripple scheme of Takahashi, Tani and
Kunihiro (arXiv:0910.2530), with the adjacent Toffoli/CNOT pairs of its
unwinding pass merged into Peres gates, so the emitted inventory is
Peres/CNOT/Toffoli. Subtraction uses the complement identity
``b - a = (b' + a)'``, the comparator computes only the carry chain and
uncomputes it, and the modular adder reuses the top bit of ``b`` as the
carry-out. Every builder is a pure function returning a GateSequence and is
verified against the classical integer semantics on all basis inputs in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .statevector import (
    Gate,
    GateSequence,
    cnot,
    controlled_x,
    mcx,
    peres,
    toffoli,
    x,
)


@dataclass(frozen=True, slots=True)
class RegisterRef:
    """Named contiguous range of qubit indices."""

    name: str
    offset: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"register {self.name!r}: width must be >= 1")
        if self.offset < 0:
            raise ValueError(f"register {self.name!r}: negative offset")

    def bit(self, i: int) -> int:
        """Qubit index of bit ``i`` (bit 0 = least significant)."""
        if not 0 <= i < self.width:
            raise ValueError(f"register {self.name!r}: bit {i} out of range")
        return self.offset + i

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(range(self.offset, self.offset + self.width))

    @property
    def sign_bit(self) -> int:
        """Qubit of the most significant (sign) bit."""
        return self.offset + self.width - 1

    def slice(self, width: int, name: str | None = None) -> "RegisterRef":
        """Low-order sub-register of the given width."""
        if not 1 <= width <= self.width:
            raise ValueError(f"register {self.name!r}: bad slice width {width}")
        return RegisterRef(name or self.name, self.offset, width)

    def value_of(self, basis: int) -> int:
        """Unsigned register content within a basis index."""
        return (basis >> self.offset) & ((1 << self.width) - 1)


@dataclass(frozen=True, slots=True)
class SignedEncoding:
    """Two's-complement view of a ``width``-bit register."""

    width: int

    @property
    def min_value(self) -> int:
        return -(1 << (self.width - 1))

    @property
    def max_value(self) -> int:
        return (1 << (self.width - 1)) - 1

    def encode(self, value: int) -> int:
        """Bit pattern for a signed value."""
        if not self.min_value <= value <= self.max_value:
            raise ValueError(
                f"value {value} outside [{self.min_value}, {self.max_value}] "
                f"for {self.width}-bit two's complement"
            )
        return value & ((1 << self.width) - 1)

    def decode(self, pattern: int) -> int:
        """Signed value of a bit pattern (sign-extends the top bit)."""
        if not 0 <= pattern < (1 << self.width):
            raise ValueError(f"pattern {pattern} too wide for {self.width} bits")
        if pattern >> (self.width - 1):
            return pattern - (1 << self.width)
        return pattern


def _check_disjoint(registers: Sequence[RegisterRef], singles: Sequence[int] = ()) -> None:
    seen: set[int] = set()
    count = 0
    for reg in registers:
        seen.update(reg.bits)
        count += reg.width
    for q in singles:
        if q < 0:
            raise ValueError(f"negative qubit index {q}")
        seen.add(q)
        count += 1
    if len(seen) != count:
        names = ", ".join(r.name for r in registers)
        raise ValueError(f"operand ranges overlap ({names} / {list(singles)})")


def _check_same_width(a: RegisterRef, b: RegisterRef) -> None:
    if a.width != b.width:
        raise ValueError(
            f"width mismatch: {a.name!r} has {a.width} bits, {b.name!r} has {b.width}"
        )


def build_adder(a: RegisterRef, b: RegisterRef, high: int) -> GateSequence:
    """In-place ripple addition: (A, B, 0) -> (A, (A+B) mod 2^n, carry).

    ``high`` must be a caller-zeroed qubit disjoint from both registers; it
    receives the carry-out (is XORed with it, making the sequence reversible
    for any initial ``high``).
    """
    _check_same_width(a, b)
    _check_disjoint([a, b], [high])
    n = a.width
    if n == 1:
        return GateSequence([peres(a.bit(0), b.bit(0), high)])
    gates: list[Gate] = []
    for i in range(1, n):
        gates.append(cnot(a.bit(i), b.bit(i)))
    gates.append(cnot(a.bit(n - 1), high))
    for i in range(n - 1, 1, -1):
        gates.append(cnot(a.bit(i - 1), a.bit(i)))
    for i in range(n - 1):
        gates.append(toffoli(a.bit(i), b.bit(i), a.bit(i + 1)))
    gates.append(peres(a.bit(n - 1), b.bit(n - 1), high))
    for j in range(n - 2, 0, -1):
        gates.append(peres(a.bit(j), b.bit(j), a.bit(j + 1)))
    gates.append(toffoli(a.bit(0), b.bit(0), a.bit(1)))
    for i in range(1, n - 1):
        gates.append(cnot(a.bit(i), a.bit(i + 1)))
    for i in range(n):
        gates.append(cnot(a.bit(i), b.bit(i)))
    return GateSequence(gates)


def build_controlled_adder(
    ctrl: int, a: RegisterRef, b: RegisterRef, high: int
) -> GateSequence:
    """Adder applied when ``ctrl`` is |1>, identity when |0>.

    Only the gates that write into ``b`` or ``high`` gain the extra control;
    the carry bookkeeping inside ``a`` cancels on its own when the sum bits
    are never written.
    """
    _check_same_width(a, b)
    _check_disjoint([a, b], [high, ctrl])
    n = a.width
    if n == 1:
        return GateSequence(
            [
                mcx((ctrl, a.bit(0), b.bit(0)), high),
                toffoli(ctrl, a.bit(0), b.bit(0)),
            ]
        )
    gates: list[Gate] = []
    for i in range(1, n):
        gates.append(toffoli(ctrl, a.bit(i), b.bit(i)))
    gates.append(toffoli(ctrl, a.bit(n - 1), high))
    for i in range(n - 1, 1, -1):
        gates.append(cnot(a.bit(i - 1), a.bit(i)))
    for i in range(n - 1):
        gates.append(toffoli(a.bit(i), b.bit(i), a.bit(i + 1)))
    gates.append(mcx((ctrl, a.bit(n - 1), b.bit(n - 1)), high))
    for i in range(n - 1, 0, -1):
        gates.append(toffoli(ctrl, a.bit(i), b.bit(i)))
        gates.append(toffoli(a.bit(i - 1), b.bit(i - 1), a.bit(i)))
    for i in range(1, n - 1):
        gates.append(cnot(a.bit(i), a.bit(i + 1)))
    for i in range(n):
        gates.append(toffoli(ctrl, a.bit(i), b.bit(i)))
    return GateSequence(gates)


def build_modular_adder(a: RegisterRef, b: RegisterRef) -> GateSequence:
    """In-place (A+B) mod 2^n into ``b``, no carry qubit.

    The top bit of ``b`` stands in for the carry-out: the plain adder runs on
    the low n-1 bits and a final CNOT folds in the top bits.
    """
    _check_same_width(a, b)
    _check_disjoint([a, b])
    n = a.width
    if n == 1:
        return GateSequence([cnot(a.bit(0), b.bit(0))])
    low_a, low_b = a.slice(n - 1), b.slice(n - 1)
    return build_adder(low_a, low_b, b.bit(n - 1)) + [cnot(a.bit(n - 1), b.bit(n - 1))]


def build_controlled_modular_adder(
    ctrl: int, a: RegisterRef, b: RegisterRef
) -> GateSequence:
    """Controlled (A+B) mod 2^n; the workhorse of the oracle compiler."""
    _check_same_width(a, b)
    _check_disjoint([a, b], [ctrl])
    n = a.width
    if n == 1:
        return GateSequence([toffoli(ctrl, a.bit(0), b.bit(0))])
    low_a, low_b = a.slice(n - 1), b.slice(n - 1)
    return build_controlled_adder(ctrl, low_a, low_b, b.bit(n - 1)) + [
        toffoli(ctrl, a.bit(n - 1), b.bit(n - 1))
    ]


def build_subtractor(a: RegisterRef, b: RegisterRef, high: int) -> GateSequence:
    """In-place (B-A) mod 2^n into ``b`` via complement-add-complement.

    ``high`` is XORed with the borrow: it ends 1 exactly when A > B.
    """
    _check_same_width(a, b)
    _check_disjoint([a, b], [high])
    complement_b = [x(q) for q in b.bits]
    return GateSequence(complement_b) + build_adder(a, b, high) + complement_b


def _carry_chain(a: RegisterRef, b: RegisterRef, target: int) -> list[Gate]:
    """Adder prefix after which ``target`` is XORed with carry(A+B).

    Leaves a and b scrambled; every gate is self-inverse, so reversing the
    non-target gates restores them.
    """
    n = a.width
    if n == 1:
        return [toffoli(a.bit(0), b.bit(0), target)]
    gates: list[Gate] = []
    for i in range(1, n):
        gates.append(cnot(a.bit(i), b.bit(i)))
    gates.append(cnot(a.bit(n - 1), target))
    for i in range(n - 1, 1, -1):
        gates.append(cnot(a.bit(i - 1), a.bit(i)))
    for i in range(n - 1):
        gates.append(toffoli(a.bit(i), b.bit(i), a.bit(i + 1)))
    gates.append(toffoli(a.bit(n - 1), b.bit(n - 1), target))
    return gates


def build_comparator(a: RegisterRef, b: RegisterRef, flag: int) -> GateSequence:
    """Strict unsigned less-than: flag ^= [A < B]; ``a`` and ``b`` restored.

    Complements ``a``, rides only the carry chain of the adder into ``flag``
    (carry(A'+B) = 1 iff A < B), then uncomputes the chain.
    """
    _check_same_width(a, b)
    _check_disjoint([a, b], [flag])
    complement_a = [x(q) for q in a.bits]
    chain = _carry_chain(a, b, flag)
    unchain = [g for g in reversed(chain) if flag not in g.qubits]
    return GateSequence(complement_a + chain + unchain + complement_a)


def build_signed_comparator(a: RegisterRef, b: RegisterRef, flag: int) -> GateSequence:
    """Two's-complement less-than: flag ^= [A < B] for signed A, B.

    Flipping both sign bits converts to the order-preserving biased
    (offset-binary) form, after which the unsigned comparator applies.
    """
    _check_same_width(a, b)
    _check_disjoint([a, b], [flag])
    bias = [x(a.sign_bit), x(b.sign_bit)]
    return GateSequence(bias) + build_comparator(a, b, flag) + bias


def build_load_constant(value: int, reg: RegisterRef) -> GateSequence:
    """X gates writing ``value`` into a zeroed register; self-inverse."""
    if value < 0 or value >= (1 << reg.width):
        raise ValueError(
            f"constant {value} does not fit in {reg.width}-bit register {reg.name!r}"
        )
    return GateSequence(x(reg.bit(i)) for i in range(reg.width) if (value >> i) & 1)


def build_controlled_negate(ctrl: int, f: RegisterRef) -> GateSequence:
    """Two's-complement negation of ``f`` when ``ctrl`` is |1>.

    Complement all bits, then add one (controlled increment). Negating the
    most negative value -2^(p-1) wraps to itself, the standard two's
    complement behaviour.
    """
    _check_disjoint([f], [ctrl])
    p = f.width
    gates: list[Gate] = [cnot(ctrl, f.bit(i)) for i in range(p)]
    for k in range(p - 1, 0, -1):
        gates.append(controlled_x((ctrl, *[f.bit(j) for j in range(k)]), f.bit(k)))
    gates.append(cnot(ctrl, f.bit(0)))
    return GateSequence(gates)
