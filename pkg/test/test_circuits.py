"""
Unit tests for the two-local ansatz and the QAOA circuit.
"""
import unittest

import numpy as np
from scipy.linalg import expm

from poqa.core.circuits import (
    build_qaoa_circuit,
    build_two_local,
    entanglement_pairs,
    qaoa_template,
    simulate,
)
from poqa.core.encoding import ising_table
from poqa.core.simulator import expectation_diagonal
from poqa.models.circuit import (
    CONFIG_LABELS,
    AnsatzConfig,
    Gate,
    GateKind,
    Parameter,
    Rotation,
)
from poqa.models.problem import IsingHamiltonian

X = np.array([[0, 1], [1, 0]], dtype=complex)


def mixer_operator(n):
    """sum_i X_i as a dense matrix, qubit 0 the least-significant index bit."""
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for q in range(n):
        term = np.array([[1.0]], dtype=complex)
        for k in reversed(range(n)):
            term = np.kron(term, X if k == q else np.eye(2))
        total += term
    return total


def qaoa_oracle(ising, betas, gammas):
    """<psi|H|psi> from explicit matrix exponentials of the cost and mixer Hamiltonians."""
    table = ising_table(ising)
    dim = 1 << ising.n
    psi = np.full(dim, 1 / np.sqrt(dim), dtype=complex)
    cost = np.diag(table - ising.offset).astype(complex)
    mixer = mixer_operator(ising.n)
    for beta, gamma in zip(betas, gammas):
        psi = expm(-1j * gamma * cost) @ psi
        psi = expm(-1j * beta * mixer) @ psi
    return float(np.real(np.conj(psi) @ (table * psi)))


def random_ising(rng, n):
    return IsingHamiltonian(
        n=n, h=rng.normal(size=n), j=np.triu(rng.normal(size=(n, n)), 1), offset=float(rng.normal()),
    )


class TestEntanglementPairs(unittest.TestCase):
    """Tests for the three entanglement structures."""

    def test_examples(self):
        self.assertEqual(entanglement_pairs(3, 'full'), [(0, 1), (0, 2), (1, 2)])
        self.assertEqual(entanglement_pairs(4, 'circular'), [(3, 0), (0, 1), (1, 2), (2, 3)])
        self.assertEqual(entanglement_pairs(5, 'pairwise'), [(0, 1), (2, 3)])

    def test_pair_counts(self):
        for n in range(2, 9):
            self.assertEqual(len(entanglement_pairs(n, 'full')), n * (n - 1) // 2)
            self.assertEqual(len(entanglement_pairs(n, 'circular')), n)
            self.assertEqual(len(entanglement_pairs(n, 'pairwise')), n // 2)

    def test_too_few_qubits(self):
        with self.assertRaisesRegex(ValueError, "entanglement needs"):
            entanglement_pairs(1, 'full')

    def test_unknown_structure(self):
        with self.assertRaises(ValueError):
            entanglement_pairs(3, 'star')


class TestAnsatzConfig(unittest.TestCase):
    """Tests for the named design points."""

    def test_labels(self):
        self.assertEqual(CONFIG_LABELS, list('BCDEFGHIJKLM'))
        b = AnsatzConfig.from_label('B')
        self.assertEqual(b.key(), ('full', 'ry', 'cz', 3))
        self.assertEqual(AnsatzConfig.from_label('k').key(), ('full', 'rx', 'cx', 5))
        self.assertEqual(AnsatzConfig.from_label('M').key(), ('circular', 'rx', 'cx', 5))

    def test_unknown_label(self):
        with self.assertRaisesRegex(ValueError, "unknown config label"):
            AnsatzConfig.from_label('Z')

    def test_inconsistent_label(self):
        with self.assertRaises(ValueError):
            AnsatzConfig('rx', 'cz', 'full', 3, label='B')

    def test_invalid_fields(self):
        with self.assertRaises(ValueError):
            AnsatzConfig('rz', 'cz', 'full', 3)
        with self.assertRaises(ValueError):
            AnsatzConfig('ry', 'cz', 'full', 0)

    def test_round_trip(self):
        config = AnsatzConfig.from_label('G')
        self.assertEqual(AnsatzConfig.from_dict(config.to_dict()), config)


class TestTwoLocal(unittest.TestCase):
    """Tests for the layered two-local circuit."""

    def test_smallest_layout(self):
        """n = 2, (ry, cz, full, 1): rotation, entangle, rotation."""
        circuit = build_two_local(2, AnsatzConfig('ry', 'cz', 'full', 1))
        self.assertEqual(circuit.param_count, 4)
        self.assertEqual(list(circuit.ops), [
            Gate(GateKind.RY, (0,), Parameter(0)),
            Gate(GateKind.RY, (1,), Parameter(1)),
            Gate(GateKind.CZ, (0, 1)),
            Gate(GateKind.RY, (0,), Parameter(2)),
            Gate(GateKind.RY, (1,), Parameter(3)),
        ])

    def test_param_counts(self):
        for label in CONFIG_LABELS:
            config = AnsatzConfig.from_label(label)
            circuit = build_two_local(8, config)
            self.assertEqual(circuit.param_count, 8 * (config.reps + 1))
        self.assertEqual(build_two_local(8, AnsatzConfig.from_label('B')).param_count, 32)
        self.assertEqual(build_two_local(8, AnsatzConfig.from_label('E')).param_count, 48)

    def test_each_slot_used_once(self):
        circuit = build_two_local(5, AnsatzConfig.from_label('J'))
        for i in range(circuit.param_count):
            gates = circuit.slot_gates(i)
            self.assertEqual(len(gates), 1)
            self.assertIs(gates[0].kind, GateKind.RX)

    def test_zero_parameters_is_identity(self):
        """ry ansaetze at theta = 0 leave |0...0> in place for every structure and entangler."""
        for label in CONFIG_LABELS:
            config = AnsatzConfig.from_label(label)
            if config.rotation is not Rotation.RY:
                continue
            for entangler in ('cz', 'cx'):
                variant = AnsatzConfig('ry', entangler, config.structure, config.reps)
                circuit = build_two_local(4, variant)
                state = simulate(circuit, np.zeros(circuit.param_count))
                self.assertAlmostEqual(abs(state.amp[0]), 1.0, places=12)

    def test_parameter_length_checked(self):
        circuit = build_two_local(3, AnsatzConfig.from_label('C'))
        with self.assertRaises(ValueError):
            simulate(circuit, np.zeros(circuit.param_count - 1))
        with self.assertRaises(ValueError):
            simulate(circuit)

    def test_too_few_qubits(self):
        with self.assertRaisesRegex(ValueError, "entanglement needs"):
            build_two_local(1, AnsatzConfig.from_label('B'))


class TestQaoaCircuit(unittest.TestCase):
    """Tests for QAOA circuit construction and simulation."""

    def test_zero_angles_uniform(self):
        ising = random_ising(np.random.default_rng(0), 3)
        circuit = build_qaoa_circuit(ising, 1, [0.0], [0.0])
        state = simulate(circuit)
        self.assertTrue(np.allclose(state.amp, np.full(8, 1 / np.sqrt(8)), atol=1e-12))
        table = ising_table(ising)
        self.assertAlmostEqual(expectation_diagonal(state, table), table.mean(), delta=1e-12)

    def test_zero_hamiltonian(self):
        """A constant landscape gives the offset for any angles."""
        ising = IsingHamiltonian(n=2, h=np.zeros(2), j=np.zeros((2, 2)), offset=0.75)
        circuit = build_qaoa_circuit(ising, 2, [0.3, -1.1], [0.7, 2.0])
        self.assertEqual(sum(1 for g in circuit.ops if g.kind in (GateKind.RZ, GateKind.RZZ)), 0)
        value = expectation_diagonal(simulate(circuit), ising_table(ising))
        self.assertAlmostEqual(value, 0.75, delta=1e-12)

    def test_param_count(self):
        ising = random_ising(np.random.default_rng(1), 3)
        for p in (1, 3, 5):
            self.assertEqual(qaoa_template(ising, p).param_count, 2 * p)

    def test_length_mismatch(self):
        ising = random_ising(np.random.default_rng(1), 2)
        with self.assertRaisesRegex(ValueError, "length mismatch"):
            build_qaoa_circuit(ising, 2, [0.1], [0.2, 0.3])

    def test_matrix_exponential_grid(self):
        """h = (1, 0), j = 0, p = 1 over an 11 x 11 grid of angles."""
        ising = IsingHamiltonian(n=2, h=[1.0, 0.0], j=np.zeros((2, 2)))
        table = ising_table(ising)
        for beta in np.linspace(-np.pi, np.pi, 11):
            for gamma in np.linspace(-np.pi, np.pi, 11):
                state = simulate(build_qaoa_circuit(ising, 1, [beta], [gamma]))
                self.assertAlmostEqual(
                    expectation_diagonal(state, table), qaoa_oracle(ising, [beta], [gamma]),
                    delta=1e-9,
                )

    def test_matrix_exponential_random(self):
        """Random Hamiltonians on up to three qubits, several layers."""
        rng = np.random.default_rng(2)
        for n in (1, 2, 3):
            for p in (1, 2, 3):
                ising = random_ising(rng, n)
                table = ising_table(ising)
                for _ in range(5):
                    betas = rng.uniform(-np.pi, np.pi, p)
                    gammas = rng.uniform(-np.pi, np.pi, p)
                    template = qaoa_template(ising, p)
                    state = simulate(template, np.concatenate([betas, gammas]))
                    self.assertAlmostEqual(
                        expectation_diagonal(state, table), qaoa_oracle(ising, betas, gammas),
                        delta=1e-9,
                    )


if __name__ == '__main__':
    unittest.main()
