"""Simulator core: construction, gate semantics, measurement, engine properties."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import permutation_kinds, random_sequence
from qsmax import statevector as sv
from qsmax.statevector import (
    CapacityError,
    Gate,
    GateKind,
    GateSequence,
    IntegrityError,
    _densify,
    apply_gate,
    apply_sequence,
    cnot,
    cphase_flip_zero,
    from_amplitudes,
    get_amplitude,
    h,
    mcx,
    measure_all,
    new_basis_state,
    new_zero_state,
    peres,
    peres_inv,
    toffoli,
    x,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class TestConstruction:
    def test_single_qubit_zero_state(self):
        state = new_zero_state(1)
        np.testing.assert_array_equal(state.amplitudes, [1.0, 0.0])

    def test_three_qubit_zero_state(self):
        state = new_zero_state(3)
        assert state.amplitudes[0] == 1.0
        assert not state.amplitudes[1:].any()

    def test_default_cap_rejects_27_qubits(self):
        with pytest.raises(CapacityError, match="26"):
            new_zero_state(27)

    def test_cap_is_configurable(self):
        with pytest.raises(CapacityError, match="cap of 5"):
            new_zero_state(6, qubit_cap=5)
        assert new_zero_state(6, qubit_cap=6).num_qubits == 6

    def test_zero_qubits_rejected(self):
        with pytest.raises(ValueError):
            new_zero_state(0)

    def test_basis_state(self):
        state = new_basis_state(3, 5)
        assert get_amplitude(state, 5) == 1.0
        with pytest.raises(ValueError):
            new_basis_state(3, 8)

    def test_from_amplitudes_checks_norm_and_shape(self):
        with pytest.raises(ValueError, match="normalized"):
            from_amplitudes([1.0, 1.0])
        with pytest.raises(ValueError, match="power of two"):
            from_amplitudes([1.0, 0.0, 0.0])
        state = from_amplitudes([INV_SQRT2, 1j * INV_SQRT2])
        assert get_amplitude(state, 1) == pytest.approx(1j * INV_SQRT2)


class TestGateSemantics:
    def test_hadamard_on_zero(self):
        state = apply_gate(new_zero_state(1), h(0))
        np.testing.assert_allclose(state.amplitudes, [INV_SQRT2, INV_SQRT2])

    def test_x_flips(self):
        state = apply_gate(new_zero_state(2), x(1))
        assert get_amplitude(state, 2) == 1.0

    def test_cnot_fires_only_on_control(self):
        state = apply_gate(new_basis_state(2, 1), cnot(0, 1))
        assert get_amplitude(state, 3) == 1.0
        state = apply_gate(new_basis_state(2, 2), cnot(0, 1))
        assert get_amplitude(state, 2) == 1.0

    def test_toffoli_on_110(self):
        # controls on bits 2 and 1, target bit 0: |110> -> |111>
        state = apply_gate(new_basis_state(3, 0b110), toffoli(2, 1, 0))
        assert get_amplitude(state, 0b111) == 1.0

    def test_mcx_requires_all_controls(self):
        gate = mcx([0, 1, 2], 3)
        assert apply_gate(new_basis_state(4, 0b0111), gate).amplitudes[0b1111] == 1.0
        assert apply_gate(new_basis_state(4, 0b0011), gate).amplitudes[0b0011] == 1.0

    @staticmethod
    def _peres_expected(a: int, b: int, c: int) -> tuple[int, int, int]:
        return a, a ^ b, (a & b) ^ c

    def test_peres_truth_table(self):
        for bits in range(8):
            a, b, c = (bits >> 2) & 1, (bits >> 1) & 1, bits & 1
            state = apply_gate(new_basis_state(3, bits), peres(2, 1, 0))
            ea, eb, ec = self._peres_expected(a, b, c)
            assert get_amplitude(state, (ea << 2) | (eb << 1) | ec) == 1.0

    def test_peres_example_110(self):
        # (a, b, c) = (1, 1, 0) -> (1, 0, 1)
        state = apply_gate(new_basis_state(3, 0b110), peres(2, 1, 0))
        assert get_amplitude(state, 0b101) == 1.0

    def test_peres_equals_toffoli_then_cnot(self):
        for bits in range(8):
            lhs = apply_gate(new_basis_state(3, bits), peres(2, 1, 0))
            rhs = new_basis_state(3, bits)
            apply_gate(rhs, toffoli(2, 1, 0))
            apply_gate(rhs, cnot(2, 1))
            np.testing.assert_array_equal(lhs.amplitudes, rhs.amplitudes)

    def test_peres_inverse_roundtrip(self):
        for bits in range(8):
            state = new_basis_state(3, bits)
            apply_gate(state, peres(2, 1, 0))
            apply_gate(state, peres_inv(2, 1, 0))
            assert get_amplitude(state, bits) == 1.0

    def test_cphase_flips_only_all_zero(self):
        state = new_zero_state(2)
        apply_gate(state, h(0))
        apply_gate(state, h(1))
        apply_gate(state, cphase_flip_zero([0, 1]))
        np.testing.assert_allclose(state.amplitudes, [-0.5, 0.5, 0.5, 0.5])

    def test_gate_validation(self):
        with pytest.raises(ValueError, match="duplicate"):
            cnot(1, 1)
        with pytest.raises(ValueError, match="operand"):
            Gate(GateKind.PERES, (0, 1))
        with pytest.raises(ValueError, match="operand"):
            Gate(GateKind.X, (0, 1))
        with pytest.raises(ValueError):
            Gate(GateKind.CPHASE_FLIP_ZERO, ())

    def test_apply_gate_range_check(self):
        with pytest.raises(ValueError, match="out of range"):
            apply_gate(new_zero_state(2), x(2))


class TestSequences:
    def test_empty_sequence_is_identity(self):
        state = apply_gate(new_zero_state(2), h(0))
        before = state.amplitudes.copy()
        apply_sequence(state, GateSequence())
        np.testing.assert_array_equal(state.amplitudes, before)

    def test_reverse_swaps_peres_direction(self):
        seq = GateSequence([x(0), peres(0, 1, 2), h(1)])
        kinds = [g.kind for g in seq.reverse()]
        assert kinds == [GateKind.H, GateKind.PERES_INV, GateKind.X]

    def test_four_hadamards_make_uniform(self):
        state = new_zero_state(4)
        apply_sequence(state, GateSequence(h(i) for i in range(4)))
        np.testing.assert_allclose(state.amplitudes, np.full(16, 0.25), atol=1e-12)

    def test_error_carries_gate_position(self):
        seq = GateSequence([x(0), x(5)])
        with pytest.raises(ValueError, match=r"gate 1 \(X\)"):
            apply_sequence(new_zero_state(2), seq)


class TestMeasurement:
    def test_basis_state_is_deterministic(self):
        state = new_basis_state(3, 5)
        rng = np.random.default_rng(123)
        assert all(measure_all(state, rng) == 5 for _ in range(100))

    def test_uniform_frequencies_within_5_sigma(self):
        state = new_zero_state(4)
        apply_sequence(state, GateSequence(h(i) for i in range(4)))
        rng = np.random.default_rng(42)
        counts = np.bincount(
            [measure_all(state, rng) for _ in range(10_000)], minlength=16
        )
        sigma = math.sqrt(10_000 * (1 / 16) * (15 / 16))
        assert np.all(np.abs(counts - 625) < 5 * sigma)

    def test_same_seed_reproduces_samples(self):
        state = new_zero_state(4)
        apply_sequence(state, GateSequence(h(i) for i in range(4)))
        a = [measure_all(state, np.random.default_rng(7)) for _ in range(20)]
        b = [measure_all(state, np.random.default_rng(7)) for _ in range(20)]
        assert a == b

    def test_norm_drift_raises_integrity_error(self):
        state = new_zero_state(2)
        state.amplitudes[0] = 2.0  # corrupt past the 1e-6 gate
        with pytest.raises(IntegrityError):
            measure_all(state, np.random.default_rng(0))


class TestAmplitudeAccess:
    def test_zero_state_amplitudes(self):
        state = new_zero_state(1)
        assert get_amplitude(state, 0) == 1 + 0j
        assert get_amplitude(state, 1) == 0j

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            get_amplitude(new_zero_state(2), 4)
        with pytest.raises(ValueError):
            get_amplitude(new_zero_state(2), -1)


class TestEngineProperties:
    """Seeded randomized sweeps over the gate set."""

    @pytest.mark.parametrize("num_qubits", [2, 5, 10])
    def test_norm_preserved(self, num_qubits):
        rng = np.random.default_rng(num_qubits)
        for _ in range(8):
            state = new_zero_state(num_qubits)
            apply_sequence(state, random_sequence(rng, num_qubits, 200))
            assert abs(sv.norm_squared(state) - 1.0) < 1e-10

    @pytest.mark.parametrize("num_qubits", [2, 5, 10])
    def test_sequence_then_reverse_is_identity(self, num_qubits):
        rng = np.random.default_rng(100 + num_qubits)
        for _ in range(8):
            seq = random_sequence(rng, num_qubits, 200)
            state = new_zero_state(num_qubits)
            # start from a random superposition so the check is not trivial
            apply_sequence(state, random_sequence(rng, num_qubits, 20))
            before = state.amplitudes.copy()
            apply_sequence(state, seq)
            apply_sequence(state, seq.reverse())
            np.testing.assert_allclose(state.amplitudes, before, atol=1e-10)

    @pytest.mark.parametrize("num_qubits", [3, 6, 9])
    def test_permutation_gates_preserve_amplitude_multiset(self, num_qubits):
        rng = np.random.default_rng(200 + num_qubits)
        for _ in range(8):
            state = new_zero_state(num_qubits)
            apply_sequence(state, random_sequence(rng, num_qubits, 15))
            before = np.sort(np.abs(state.amplitudes))
            seq = random_sequence(rng, num_qubits, 120, kinds=permutation_kinds())
            apply_sequence(state, seq)
            after = np.sort(np.abs(state.amplitudes))
            np.testing.assert_allclose(after, before, atol=1e-12)

    @pytest.mark.parametrize("num_qubits", [2, 4, 7])
    def test_active_set_path_matches_dense_path(self, num_qubits):
        rng = np.random.default_rng(300 + num_qubits)
        for _ in range(10):
            seq = random_sequence(rng, num_qubits, 150)
            sparse_state = new_zero_state(num_qubits)
            dense_state = _densify(new_zero_state(num_qubits))
            apply_sequence(sparse_state, seq)
            apply_sequence(dense_state, seq)
            np.testing.assert_allclose(
                sparse_state.amplitudes, dense_state.amplitudes, atol=1e-12
            )

    def test_active_set_entries_outside_support_are_exact_zero(self):
        rng = np.random.default_rng(9)
        state = new_zero_state(6)
        apply_sequence(state, random_sequence(rng, 6, 60))
        if state._active is not None:
            outside = np.delete(np.arange(state.dimension), state._active)
            assert not state.amplitudes[outside].any()
