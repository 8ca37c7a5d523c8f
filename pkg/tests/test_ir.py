import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from slacktune import Circuit, CircuitError, cx_depth, invert_circuit, line_device, validate
from slacktune.ir import GateKind, Instruction, cx, delay, h, measure, rz, x
from slacktune.sim import circuit_unitary

from conftest import random_circuit


class TestInstruction:
    def test_arity_enforced(self):
        with pytest.raises(CircuitError):
            Instruction(GateKind.CX, (0,))
        with pytest.raises(CircuitError):
            Instruction(GateKind.X, (0, 1))

    def test_duplicate_qubits_rejected(self):
        with pytest.raises(CircuitError):
            Instruction(GateKind.CX, (1, 1))

    def test_rz_angle_must_be_finite(self):
        with pytest.raises(CircuitError):
            rz(float("nan"), 0)

    def test_delay_duration_non_negative_integer(self):
        with pytest.raises(CircuitError):
            delay(-1, 0)
        with pytest.raises(CircuitError):
            Instruction(GateKind.DELAY, (0,), 1.5)


class TestCircuit:
    def test_qubit_range_checked(self):
        with pytest.raises(CircuitError):
            Circuit(1, (cx(0, 1),))

    def test_measure_must_be_trailing(self):
        with pytest.raises(CircuitError):
            Circuit(1, (measure(0), x(0)))
        Circuit(1, (x(0), measure(0)))  # fine

    def test_concatenation(self):
        c = Circuit(2, (h(0),)) + Circuit(2, (cx(0, 1),))
        assert [i.kind for i in c.instructions] == [GateKind.H, GateKind.CX]


class TestInvertCircuit:
    def test_self_inverse_gates(self):
        c = Circuit(2, (h(0), cx(0, 1)))
        inv = invert_circuit(c)
        assert [i.kind for i in inv.instructions] == [GateKind.CX, GateKind.H]
        assert inv.instructions[0].qubits == (0, 1)

    def test_rotation_negation(self):
        inv = invert_circuit(Circuit(1, (rz(math.pi / 4, 0),)))
        assert inv.instructions[0].kind is GateKind.RZ
        assert inv.instructions[0].param == -math.pi / 4

    def test_s_sx_pairing(self):
        from slacktune.ir import s, sx
        inv = invert_circuit(Circuit(1, (s(0), sx(0))))
        assert [i.kind for i in inv.instructions] == [GateKind.SXDG, GateKind.SDG]

    def test_rejects_measurements(self):
        with pytest.raises(CircuitError):
            invert_circuit(Circuit(1, (x(0), measure(0))))

    def test_unitary_identity_up_to_global_phase(self):
        # brute-force unitary oracle, column by column
        rng = np.random.default_rng(11)
        c = random_circuit(rng, 3, 20)
        u = circuit_unitary(c + invert_circuit(c))
        phase = u[0, 0] / abs(u[0, 0])
        assert np.max(np.abs(u - phase * np.eye(8))) < 1e-9

    @given(hst.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_involution(self, seed):
        rng = np.random.default_rng(seed)
        c = random_circuit(rng, 3, 15, p_delay=0.1)
        assert invert_circuit(invert_circuit(c)) == c


class TestCxDepth:
    def test_disjoint_cx_parallel(self):
        assert cx_depth(Circuit(4, (cx(0, 1), cx(2, 3)))) == 1

    def test_chained_path(self):
        c = Circuit(3, (cx(0, 1), cx(1, 2), x(1), cx(0, 1)))
        assert cx_depth(c) == 3  # longest-path enumeration over the 4-node DAG

    def test_empty_circuit(self):
        assert cx_depth(Circuit(0, ())) == 0

    @given(hst.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_subadditive_under_concatenation(self, seed):
        rng = np.random.default_rng(seed)
        c1 = random_circuit(rng, 3, 10)
        c2 = random_circuit(rng, 3, 10)
        assert cx_depth(c1 + c2) <= cx_depth(c1) + cx_depth(c2)

    @given(hst.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_invariant_under_single_qubit_gates(self, seed):
        rng = np.random.default_rng(seed)
        c = random_circuit(rng, 3, 20, p_delay=0.1)
        stripped = Circuit(3, tuple(i for i in c.instructions if i.kind is GateKind.CX))
        assert cx_depth(c) == cx_depth(stripped)

    def test_inverse_concatenation_doubles_depth(self):
        rng = np.random.default_rng(5)
        c = random_circuit(rng, 3, 25)
        assert cx_depth(c + invert_circuit(c)) == 2 * cx_depth(c)


class TestValidate:
    def test_uncoupled_pair(self):
        dev = line_device(3)
        violations = validate(Circuit(3, (cx(0, 2),)), dev)
        assert len(violations) == 1
        assert violations[0].code == "uncoupled-pair"
        assert "(0, 2)" in violations[0].message

    def test_empty_circuit_ok(self):
        assert validate(Circuit(0, ()), line_device(5)) == []

    def test_qubit_out_of_range(self):
        violations = validate(Circuit(6, (x(5),)), line_device(5))
        assert violations[0].code == "qubit-range"
        assert "out of range" in violations[0].message

    def test_missing_duration_reported(self):
        from dataclasses import replace
        dev = replace(line_device(2), durations={"cx": 100, "measure": 50})
        violations = validate(Circuit(2, (x(0),)), dev)
        assert violations and violations[0].code == "missing-duration"
