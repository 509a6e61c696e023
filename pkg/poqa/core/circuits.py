"""Two-local ansatz and QAOA circuit builders."""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..models.circuit import (
    AnsatzConfig,
    Gate,
    GateKind,
    Parameter,
    ParamCircuit,
    Structure,
)
from ..models.problem import IsingHamiltonian
from .simulator import Statevector, new_statevector, run_gates


def entanglement_pairs(n: int, structure: str) -> List[Tuple[int, int]]:
    """
    Qubit pairs touched by one entanglement layer.

    full: every (i, j) with i < j, lexicographic.
    circular: (n-1, 0) first, then the linear chain (0, 1), ..., (n-2, n-1).
    pairwise: disjoint pairs (0, 1), (2, 3), ...; an odd last qubit stays unpaired.
    """
    if n < 2:
        raise ValueError(f"entanglement needs ≥2 qubits, got {n}")
    structure = Structure(structure)

    if structure is Structure.FULL:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    if structure is Structure.CIRCULAR:
        return [(n - 1, 0)] + [(i, i + 1) for i in range(n - 1)]
    return [(i, i + 1) for i in range(0, n - 1, 2)]


def build_two_local(n: int, config: AnsatzConfig) -> ParamCircuit:
    """
    Rotation layer, then ``reps`` x [entanglement layer, rotation layer].

    Slots are numbered layer-major, qubit-minor, so
    ``param_count == n * (reps + 1)``.
    """
    if n < 2:
        raise ValueError(f"entanglement needs ≥2 qubits, got {n}")
    if not isinstance(config, AnsatzConfig):
        raise ValueError(f"invalid config: {config!r}")

    rotation = GateKind(config.rotation.value)
    entangler = GateKind(config.entangler.value)
    pairs = entanglement_pairs(n, config.structure)

    ops: List[Gate] = []
    slot = 0
    for layer in range(config.reps + 1):
        if layer:
            ops.extend(Gate(entangler, pair) for pair in pairs)
        for q in range(n):
            ops.append(Gate(rotation, (q,), Parameter(slot)))
            slot += 1

    return ParamCircuit(n=n, ops=tuple(ops), param_count=slot)


def qaoa_template(ising: IsingHamiltonian, p: int) -> ParamCircuit:
    """
    Symbolic QAOA circuit with slots ``[β_0..β_{p-1}, γ_0..γ_{p-1}]``.

    The Hamiltonian offset contributes only a global phase and is left out.
    """
    if p < 1:
        raise ValueError(f"QAOA needs p >= 1 layers, got {p}")
    n = ising.n
    couplings = ising.couplings()

    ops: List[Gate] = [Gate(GateKind.H, (q,)) for q in range(n)]
    for layer in range(p):
        beta, gamma = layer, p + layer
        for q in range(n):
            if ising.h[q] != 0:
                ops.append(Gate(GateKind.RZ, (q,), Parameter(gamma, 2.0 * ising.h[q])))
        for a, b, coupling in couplings:
            ops.append(Gate(GateKind.RZZ, (a, b), Parameter(gamma, 2.0 * coupling)))
        for q in range(n):
            ops.append(Gate(GateKind.RX, (q,), Parameter(beta, 2.0)))

    return ParamCircuit(n=n, ops=tuple(ops), param_count=2 * p)


def build_qaoa_circuit(
    ising: IsingHamiltonian,
    p: int,
    betas: Sequence[float],
    gammas: Sequence[float],
) -> ParamCircuit:
    """
    Fully bound QAOA circuit: h on every qubit, then p x [cost layer, mixer layer].

    Cost layer: rz(2γhᵢ) for hᵢ ≠ 0 and rzz(2γJᵢⱼ) for Jᵢⱼ ≠ 0. Mixer: rx(2β) on every qubit.
    """
    if len(betas) != p or len(gammas) != p:
        raise ValueError(
            f"length mismatch: p={p} with {len(betas)} betas and {len(gammas)} gammas"
        )
    template = qaoa_template(ising, p)
    values = tuple(float(b) for b in betas) + tuple(float(g) for g in gammas)
    return ParamCircuit(template.n, template.ops, template.param_count, values)


def simulate(circuit: ParamCircuit, params: Optional[Sequence[float]] = None) -> Statevector:
    """Run ``circuit`` from |0…0⟩ with ``params`` (or its bound values)."""
    if params is not None:
        params = np.asarray(params, dtype=float)
    return run_gates(new_statevector(circuit.n), circuit.bind(params))
