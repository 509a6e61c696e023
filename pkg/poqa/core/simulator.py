"""Dense statevector simulation.

Amplitudes are little-endian: qubit ``q`` is bit ``q`` of the amplitude index.
Bitstrings shown to users list qubit (asset) 0 first, see
:func:`poqa.models.problem.index_to_bits`.

Gate definitions: rx(θ)=exp(−iθX/2), ry(θ)=exp(−iθY/2), rz(θ)=exp(−iθZ/2),
rzz(θ)=exp(−iθZ⊗Z/2); cx takes the control first; cz is symmetric.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional

import numpy as np

from ..models.circuit import Gate, GateKind
from ..models.problem import index_to_bits
from .encoding import MAX_EXACT_QUBITS

logger = logging.getLogger(__name__)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass
class Statevector:
    """``n``-qubit pure state; owned by one experiment at a time."""
    n: int
    amp: np.ndarray

    def __post_init__(self):
        self.amp = np.asarray(self.amp, dtype=complex)
        if self.amp.shape != (1 << self.n,):
            raise ValueError(f"length mismatch: {self.amp.shape[0]} amplitudes for n={self.n}")

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    def norm(self) -> float:
        return float(np.sqrt(self.probabilities.sum()))

    def copy(self) -> 'Statevector':
        return Statevector(self.n, self.amp.copy())


def new_statevector(n: int) -> Statevector:
    """|0…0⟩ on ``n`` qubits, 1 <= n <= 24."""
    if not 1 <= n <= MAX_EXACT_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_EXACT_QUBITS}], got {n}")
    amp = np.zeros(1 << n, dtype=complex)
    amp[0] = 1.0
    return Statevector(n, amp)


def rotation_matrix(kind: GateKind, theta: float) -> np.ndarray:
    """2x2 matrix of a single-qubit rotation."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind is GateKind.RZ:
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=complex)
    raise ValueError(f"{kind.value} is not a single-qubit rotation")


@lru_cache(maxsize=256)
def _bit(n: int, q: int) -> np.ndarray:
    """0/1 value of qubit ``q`` for every amplitude index."""
    bit = (np.arange(1 << n, dtype=np.int64) >> q) & 1
    bit = bit.astype(float)
    bit.flags.writeable = False
    return bit


@lru_cache(maxsize=256)
def _cx_permutation(n: int, control: int, target: int) -> np.ndarray:
    indices = np.arange(1 << n, dtype=np.int64)
    flip = ((indices >> control) & 1) << target
    perm = indices ^ flip
    perm.flags.writeable = False
    return perm


def _apply_1q(amp: np.ndarray, n: int, q: int, matrix: np.ndarray) -> np.ndarray:
    view = amp.reshape(1 << (n - q - 1), 2, 1 << q)
    return np.matmul(matrix, view).reshape(-1)


def _phase(n: int, gate: Gate) -> np.ndarray:
    """Phase angle φ(k) such that a diagonal gate multiplies amplitude k by exp(iφ(k))."""
    if gate.kind is GateKind.RZ:
        z = 1.0 - 2.0 * _bit(n, gate.targets[0])
        return -0.5 * gate.angle * z
    if gate.kind is GateKind.RZZ:
        a, b = gate.targets
        zz = (1.0 - 2.0 * _bit(n, a)) * (1.0 - 2.0 * _bit(n, b))
        return -0.5 * gate.angle * zz
    if gate.kind is GateKind.CZ:
        a, b = gate.targets
        return np.pi * _bit(n, a) * _bit(n, b)
    raise ValueError(f"{gate.kind.value} is not diagonal")


def _check(state: Statevector, gate: Gate) -> None:
    if any(t >= state.n for t in gate.targets):
        raise ValueError(f"gate {gate} out of range for {state.n} qubits")
    if gate.kind.is_rotation and not isinstance(gate.angle, (int, float, np.floating)):
        raise ValueError(f"gate {gate} has an unbound parameter")


def _apply_dense(state: Statevector, gate: Gate) -> None:
    kind = gate.kind
    if kind is GateKind.H:
        state.amp = _apply_1q(state.amp, state.n, gate.targets[0], _H)
    elif kind in (GateKind.RX, GateKind.RY):
        matrix = rotation_matrix(kind, gate.angle)
        state.amp = _apply_1q(state.amp, state.n, gate.targets[0], matrix)
    elif kind is GateKind.CX:
        state.amp = state.amp[_cx_permutation(state.n, *gate.targets)]
    else:
        raise ValueError(f"unsupported gate {kind.value}")


def apply_gate(state: Statevector, gate: Gate) -> Statevector:
    """Apply one bound gate in place and return the state."""
    _check(state, gate)
    if gate.kind.is_diagonal:
        state.amp = state.amp * np.exp(1j * _phase(state.n, gate))
    else:
        _apply_dense(state, gate)
    return state


def run_gates(state: Statevector, gates: Iterable[Gate]) -> Statevector:
    """
    Apply a gate sequence in order.

    Runs of diagonal gates (rz, rzz, cz) are folded into one accumulated phase
    vector and applied with a single multiply.
    """
    pending: Optional[np.ndarray] = None
    for gate in gates:
        _check(state, gate)
        if gate.kind.is_diagonal:
            phase = _phase(state.n, gate)
            pending = phase if pending is None else pending + phase
            continue
        if pending is not None:
            state.amp = state.amp * np.exp(1j * pending)
            pending = None
        _apply_dense(state, gate)
    if pending is not None:
        state.amp = state.amp * np.exp(1j * pending)
    return state


def expectation_diagonal(state: Statevector, energy_table: np.ndarray) -> float:
    """Σₖ |ampₖ|²·Eₖ (exact, no shot noise)."""
    energy_table = np.asarray(energy_table, dtype=float)
    if energy_table.shape != state.amp.shape:
        raise ValueError(
            f"length mismatch: table has {energy_table.shape[0]} entries, "
            f"state has {state.amp.shape[0]}"
        )
    return float(state.probabilities @ energy_table)


def sample_counts(state: Statevector, shots: int, rng: np.random.Generator) -> Dict[str, int]:
    """Measure ``shots`` times in the computational basis; keys are display bitstrings."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities
    counts = rng.multinomial(shots, probs / probs.sum())
    return {
        index_to_bits(int(k), state.n): int(counts[k]) for k in np.flatnonzero(counts)
    }


def expectation_sampled(
    state: Statevector,
    energy_table: np.ndarray,
    shots: int,
    rng: np.random.Generator,
) -> float:
    """Shot-sampled estimate of :func:`expectation_diagonal`."""
    energy_table = np.asarray(energy_table, dtype=float)
    if energy_table.shape != state.amp.shape:
        raise ValueError("length mismatch between energy table and state")
    probs = state.probabilities
    counts = rng.multinomial(shots, probs / probs.sum())
    return float(counts @ energy_table / shots)


def most_probable_bitstring(state: Statevector) -> str:
    """Display bitstring of argmaxₖ |ampₖ|²; ties go to the lowest index."""
    return index_to_bits(int(np.argmax(state.probabilities)), state.n)
