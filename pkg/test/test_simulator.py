"""
Unit tests for the statevector simulator.
"""
import unittest

import numpy as np

from poqa.core.simulator import (
    Statevector,
    apply_gate,
    expectation_diagonal,
    expectation_sampled,
    most_probable_bitstring,
    new_statevector,
    run_gates,
    sample_counts,
)
from poqa.models.circuit import Gate, GateKind

SINGLE = (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.H)
DOUBLE = (GateKind.CX, GateKind.CZ, GateKind.RZZ)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def random_gate(rng, n):
    if rng.random() < 0.5:
        kind = SINGLE[rng.integers(len(SINGLE))]
        targets = (int(rng.integers(n)),)
    else:
        kind = DOUBLE[rng.integers(len(DOUBLE))]
        targets = tuple(int(t) for t in rng.choice(n, 2, replace=False))
    angle = float(rng.uniform(-np.pi, np.pi)) if kind.is_rotation else None
    return Gate(kind, targets, angle)


def random_state(rng, n):
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return Statevector(n, amp / np.linalg.norm(amp))


def dense_operator(gate, n):
    """Full 2^n x 2^n matrix of a gate, built from Kronecker products (qubit 0 rightmost)."""
    def embed(ops):
        matrix = np.array([[1.0]], dtype=complex)
        for q in reversed(range(n)):
            matrix = np.kron(matrix, ops.get(q, np.eye(2)))
        return matrix

    kind, targets, theta = gate.kind, gate.targets, gate.angle
    if kind in (GateKind.RX, GateKind.RY, GateKind.RZ):
        pauli = {GateKind.RX: X, GateKind.RY: Y, GateKind.RZ: Z}[kind]
        single = np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * pauli
        return embed({targets[0]: single})
    if kind is GateKind.H:
        return embed({targets[0]: np.array([[1, 1], [1, -1]]) / np.sqrt(2)})
    if kind is GateKind.RZZ:
        zz = embed({targets[0]: Z, targets[1]: Z})
        return np.cos(theta / 2) * np.eye(1 << n) - 1j * np.sin(theta / 2) * zz
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    flip = X if kind is GateKind.CX else Z
    return embed({targets[0]: p0}) + embed({targets[0]: p1, targets[1]: flip})


class TestStatevector(unittest.TestCase):
    """Tests for state creation and single gates."""

    def test_new_statevector(self):
        self.assertTrue(np.array_equal(new_statevector(1).amp, [1, 0]))
        self.assertTrue(np.array_equal(new_statevector(2).amp, [1, 0, 0, 0]))
        state = new_statevector(3)
        self.assertEqual(state.amp.shape, (8,))
        self.assertAlmostEqual(state.norm(), 1.0, places=15)

    def test_qubit_range(self):
        for n in (0, 25):
            with self.assertRaises(ValueError):
                new_statevector(n)

    def test_identity_rotation(self):
        state = random_state(np.random.default_rng(0), 3)
        before = state.amp.copy()
        apply_gate(state, Gate(GateKind.RX, (1,), 0.0))
        self.assertTrue(np.allclose(state.amp, before, atol=1e-15))

    def test_rx_pi(self):
        """rx(pi)|0> = -i|1>."""
        state = apply_gate(new_statevector(1), Gate(GateKind.RX, (0,), np.pi))
        self.assertTrue(np.allclose(state.amp, [0, -1j], atol=1e-12))

    def test_bell_state(self):
        state = new_statevector(2)
        run_gates(state, [Gate(GateKind.H, (0,)), Gate(GateKind.CX, (0, 1))])
        expected = np.array([1, 0, 0, 1]) / np.sqrt(2)
        self.assertTrue(np.allclose(state.amp, expected, atol=1e-12))
        self.assertEqual(most_probable_bitstring(state), '00')

    def test_control_is_first_target(self):
        """cx(1 -> 0) leaves |q0=1, q1=0> alone and flips qubit 0 of |q0=0, q1=1>."""
        state = apply_gate(new_statevector(2), Gate(GateKind.RX, (0,), np.pi))
        apply_gate(state, Gate(GateKind.CX, (1, 0)))
        self.assertEqual(most_probable_bitstring(state), '10')

        state = apply_gate(new_statevector(2), Gate(GateKind.RX, (1,), np.pi))
        apply_gate(state, Gate(GateKind.CX, (1, 0)))
        self.assertEqual(most_probable_bitstring(state), '11')

    def test_dense_oracle(self):
        """Every gate kind matches its Kronecker-product matrix."""
        rng = np.random.default_rng(1)
        n = 3
        for _ in range(60):
            gate = random_gate(rng, n)
            state = random_state(rng, n)
            expected = dense_operator(gate, n) @ state.amp
            apply_gate(state, gate)
            self.assertTrue(np.allclose(state.amp, expected, atol=1e-12), msg=str(gate))

    def test_fused_diagonals_match_sequential(self):
        rng = np.random.default_rng(2)
        gates = [random_gate(rng, 4) for _ in range(80)]
        start = random_state(rng, 4)
        fused = run_gates(start.copy(), gates)
        sequential = start.copy()
        for gate in gates:
            apply_gate(sequential, gate)
        self.assertTrue(np.allclose(fused.amp, sequential.amp, atol=1e-12))

    def test_norm_preserved(self):
        """1000 random gates on 6 qubits keep the norm within 1e-10."""
        rng = np.random.default_rng(3)
        state = run_gates(new_statevector(6), [random_gate(rng, 6) for _ in range(1000)])
        self.assertLess(abs(state.norm() - 1.0), 1e-10)

    def test_inverse_gates(self):
        """g followed by its inverse restores the state."""
        rng = np.random.default_rng(4)
        for _ in range(40):
            gate = random_gate(rng, 4)
            state = random_state(rng, 4)
            before = state.amp.copy()
            apply_gate(state, gate)
            inverse = Gate(gate.kind, gate.targets, -gate.angle) if gate.kind.is_rotation else gate
            apply_gate(state, inverse)
            self.assertTrue(np.allclose(state.amp, before, atol=1e-10))

    def test_bad_gates(self):
        with self.assertRaises(ValueError):
            apply_gate(new_statevector(2), Gate(GateKind.H, (2,)))
        with self.assertRaises(ValueError):
            Gate(GateKind.CX, (1, 1))
        with self.assertRaises(ValueError):
            Gate(GateKind.RX, (0,))
        with self.assertRaises(ValueError):
            Gate(GateKind.H, (0,), 0.5)


class TestMeasurement(unittest.TestCase):
    """Tests for expectations, sampling and solution extraction."""

    def test_expectation_delta(self):
        table = np.arange(8, dtype=float) + 3.0
        self.assertEqual(expectation_diagonal(new_statevector(3), table), 3.0)

    def test_expectation_uniform(self):
        state = run_gates(new_statevector(3), [Gate(GateKind.H, (q,)) for q in range(3)])
        table = np.random.default_rng(5).normal(size=8)
        self.assertAlmostEqual(expectation_diagonal(state, table), table.mean(), delta=1e-12)

    def test_expectation_naive_loop(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            state = random_state(rng, 4)
            table = rng.normal(size=16)
            naive = 0.0
            for k in range(16):
                naive += abs(state.amp[k]) ** 2 * table[k]
            value = expectation_diagonal(state, table)
            self.assertAlmostEqual(value, naive, delta=1e-12)
            self.assertGreaterEqual(value, table.min() - 1e-12)
            self.assertLessEqual(value, table.max() + 1e-12)

    def test_expectation_length_mismatch(self):
        with self.assertRaisesRegex(ValueError, "length mismatch"):
            expectation_diagonal(new_statevector(2), np.zeros(3))

    def test_display_order(self):
        """rx(pi) on qubit 1 of two qubits reads '01' (asset 0 first)."""
        state = apply_gate(new_statevector(2), Gate(GateKind.RX, (1,), np.pi))
        self.assertEqual(most_probable_bitstring(state), '01')
        self.assertEqual(most_probable_bitstring(new_statevector(3)), '000')

    def test_sampling_is_seeded(self):
        state = run_gates(new_statevector(2), [Gate(GateKind.H, (0,)), Gate(GateKind.H, (1,))])
        a = sample_counts(state, 1000, np.random.default_rng(7))
        b = sample_counts(state, 1000, np.random.default_rng(7))
        self.assertEqual(a, b)
        self.assertEqual(sum(a.values()), 1000)
        self.assertTrue(set(a) <= {'00', '10', '01', '11'})

    def test_sampled_expectation_converges(self):
        rng = np.random.default_rng(8)
        state = random_state(rng, 3)
        table = rng.normal(size=8)
        estimate = expectation_sampled(state, table, 200000, np.random.default_rng(9))
        self.assertAlmostEqual(estimate, expectation_diagonal(state, table), delta=0.02)

    def test_basis_state_sampling_is_exact(self):
        table = np.arange(4, dtype=float)
        state = apply_gate(new_statevector(2), Gate(GateKind.RX, (0,), np.pi))
        self.assertAlmostEqual(
            expectation_sampled(state, table, 10, np.random.default_rng(0)), 1.0, places=12,
        )


if __name__ == '__main__':
    unittest.main()
