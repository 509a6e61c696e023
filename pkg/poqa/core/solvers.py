"""VQE and QAOA solve loops over the statevector simulator."""
import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..models.circuit import AnsatzConfig, GateKind, ParamCircuit
from ..models.problem import IsingHamiltonian, Qubo
from ..models.results import OptimizerOptions, SolveResult
from .circuits import build_two_local, qaoa_template, simulate
from .encoding import energy_table, ising_table
from .optimizers import MinimizeResult, minimize
from .simulator import (
    Statevector,
    expectation_diagonal,
    expectation_sampled,
    most_probable_bitstring,
)

logger = logging.getLogger(__name__)

SHIFT = np.pi / 2
QAOA_INIT_RANGE = 0.1


class CircuitObjective:
    """
    θ ↦ ⟨ψ(θ)|H|ψ(θ)⟩ for a diagonal H given as an energy table.

    ``slot_scale`` maps optimizer coordinates to circuit angles slot by slot
    (angle = slot_scale · θ); it defaults to the identity.
    """

    def __init__(
        self,
        circuit: ParamCircuit,
        table: np.ndarray,
        shots: Optional[int] = None,
        rng: Optional[np.random.Generator] = None,
        slot_scale: Optional[Sequence[float]] = None,
    ):
        self.circuit = circuit
        self.table = np.asarray(table, dtype=float)
        self.shots = shots
        self.rng = rng if rng is not None else np.random.default_rng(0)
        if slot_scale is None:
            slot_scale = np.ones(circuit.param_count)
        self.slot_scale = np.asarray(slot_scale, dtype=float)
        if self.slot_scale.shape != (circuit.param_count,):
            raise ValueError(
                f"length mismatch: {self.slot_scale.shape[0]} slot scales "
                f"for {circuit.param_count} parameters"
            )

    @property
    def dimension(self) -> int:
        return self.circuit.param_count

    def angles(self, theta: Sequence[float]) -> np.ndarray:
        return self.slot_scale * np.asarray(theta, dtype=float)

    def state(self, theta: Sequence[float]) -> Statevector:
        return simulate(self.circuit, self.angles(theta))

    def exact(self, theta: Sequence[float]) -> float:
        return expectation_diagonal(self.state(theta), self.table)

    def __call__(self, theta: Sequence[float]) -> float:
        state = self.state(theta)
        if self.shots:
            return expectation_sampled(state, self.table, self.shots, self.rng)
        return expectation_diagonal(state, self.table)


def _start_points(dimension: int, opts: OptimizerOptions, scale: float) -> List[tuple]:
    """(x0, seed) per start, derived from ``opts.seed``."""
    if opts.init == 'zeros':
        return [(np.zeros(dimension), opts.seed)]
    children = np.random.SeedSequence(opts.seed).spawn(opts.starts)
    points = []
    for child in children:
        rng = np.random.default_rng(child)
        points.append((rng.uniform(-scale, scale, dimension), int(child.generate_state(1)[0])))
    return points


def _solve(objective: CircuitObjective, opts: OptimizerOptions, scale: float) -> SolveResult:
    best: Optional[MinimizeResult] = None
    evals = 0
    start_energies = []

    for number, (x0, seed) in enumerate(_start_points(objective.dimension, opts, scale)):
        start_opts = OptimizerOptions(**{**opts.to_dict(), 'seed': seed, 'starts': 1})
        if objective.shots:
            objective.rng = np.random.default_rng(seed)
        result = minimize(objective, x0, start_opts)
        evals += result.evals
        start_energies.append(result.fun)
        logger.debug(
            "start %d: energy %.10g after %d evaluations (converged=%s)",
            number, result.fun, result.evals, result.converged,
        )
        if best is None or result.fun < best.fun:
            best = result

    state = objective.state(best.x)
    energy = best.fun if not objective.shots else expectation_diagonal(state, objective.table)
    return SolveResult(
        params=objective.angles(best.x),
        energy=float(energy),
        bits=most_probable_bitstring(state),
        evals=evals,
        converged=best.converged,
        start_energies=start_energies,
    )


def vqe_solve(qubo: Qubo, config: AnsatzConfig, opts: Optional[OptimizerOptions] = None) -> SolveResult:
    """
    Minimize the QUBO energy over the two-local ansatz ``config``.

    Initial angles are uniform in [−π, π) per start (or zero with ``init='zeros'``);
    the best start is kept.
    """
    opts = opts or OptimizerOptions()
    objective = CircuitObjective(
        build_two_local(qubo.n, config), energy_table(qubo), shots=opts.shots,
    )
    result = _solve(objective, opts, np.pi)
    logger.debug("VQE %s: energy %.10g, bits %s", config.name, result.energy, result.bits)
    return result


def coupling_scale(ising: IsingHamiltonian) -> float:
    """Largest |hᵢ| or |Jᵢⱼ|; 1.0 for a constant Hamiltonian."""
    largest = max(np.max(np.abs(ising.h), initial=0.0), np.max(np.abs(ising.j), initial=0.0))
    return float(largest) if largest > 0 else 1.0


def qaoa_objective(ising: IsingHamiltonian, p: int, shots: Optional[int] = None) -> CircuitObjective:
    """
    QAOA energy over optimizer coordinates ``[β'_0..β'_{p-1}, γ'_0..γ'_{p-1}]``.

    β = β' and γ = γ' / :func:`coupling_scale`, so the landscape the optimizer
    sees does not depend on the overall size of the coefficients.
    """
    template = qaoa_template(ising, p)
    slot_scale = np.concatenate([np.ones(p), np.full(p, 1.0 / coupling_scale(ising))])
    return CircuitObjective(template, ising_table(ising), shots=shots, slot_scale=slot_scale)


def qaoa_solve(ising: IsingHamiltonian, p: int, opts: Optional[OptimizerOptions] = None) -> SolveResult:
    """
    Minimize the Ising energy over QAOA angles ``[β_0..β_{p-1}, γ_0..γ_{p-1}]``.

    Optimizer coordinates start uniform in [−0.1, 0.1) (see :func:`qaoa_objective`
    for how they map to angles); ``params`` holds the circuit angles. The reported
    energy includes the Hamiltonian offset.
    """
    opts = opts or OptimizerOptions()
    objective = qaoa_objective(ising, p, shots=opts.shots)
    result = _solve(objective, opts, QAOA_INIT_RANGE)
    logger.debug("QAOA p=%d: energy %.10g, bits %s", p, result.energy, result.bits)
    return result


def parameter_shift_gradient(
    objective: Callable[[np.ndarray], float],
    theta: Sequence[float],
    i: int,
) -> float:
    """
    ∂f/∂θᵢ = (f(θ + π/2·eᵢ) − f(θ − π/2·eᵢ)) / 2.

    Exact when slot ``i`` drives a single rx/ry rotation; a
    :class:`CircuitObjective` is checked for that.
    """
    theta = np.asarray(theta, dtype=float)
    if not 0 <= i < theta.shape[0]:
        raise ValueError(f"parameter index out of range: {i} not in [0, {theta.shape[0]})")

    if isinstance(objective, CircuitObjective):
        gates = objective.circuit.slot_gates(i)
        if (len(gates) != 1 or gates[0].kind not in (GateKind.RX, GateKind.RY)
                or gates[0].angle.scale != 1.0 or objective.slot_scale[i] != 1.0):
            raise ValueError(f"slot {i} is not a single rx/ry rotation parameter")

    shift = np.zeros_like(theta)
    shift[i] = SHIFT
    return float((objective(theta + shift) - objective(theta - shift)) / 2.0)
