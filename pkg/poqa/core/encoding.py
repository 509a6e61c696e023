"""Mean-variance QUBO construction, Ising conversion and the exact solver."""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..models.market import AssetStatistics
from ..models.problem import (
    Bits,
    GroundState,
    IsingHamiltonian,
    PortfolioProblem,
    Qubo,
    bits_to_tuple,
    index_to_bits,
)

logger = logging.getLogger(__name__)

# Largest problem the exhaustive solver (and the dense simulator) accept
MAX_EXACT_QUBITS = 24


def default_penalty(stats: AssetStatistics, risk_q: float) -> float:
    """λ = 2·(q·Σ|Σij| + Σ|μi|) + 1: any budget violation outweighs the whole objective range."""
    return 2.0 * (risk_q * np.abs(stats.sigma).sum() + np.abs(stats.mu).sum()) + 1.0


def build_portfolio_qubo(
    stats: AssetStatistics,
    risk_q: float,
    budget_b: int,
    penalty_lambda: Optional[float] = None,
) -> Tuple[PortfolioProblem, Qubo]:
    """
    Expand E(x) = q·xᵀΣx − μᵀx + λ(Σxᵢ − B)² into upper-triangular QUBO form.

    Args:
        stats: Expected returns and covariance.
        risk_q: Risk factor q >= 0.
        budget_b: Number of assets to select, 0 <= B <= n.
        penalty_lambda: Budget penalty weight; defaults to :func:`default_penalty`.

    Returns:
        The problem definition and its QUBO.
    """
    mu = np.asarray(stats.mu, dtype=float)
    sigma = np.asarray(stats.sigma, dtype=float)
    n = mu.shape[0]
    if sigma.shape != (n, n):
        raise ValueError(f"dimension mismatch: mu has {n} entries, sigma is {sigma.shape}")
    if int(budget_b) != budget_b or not 0 <= budget_b <= n:
        raise ValueError(f"infeasible budget: {budget_b} not in [0, {n}]")

    if penalty_lambda is None:
        penalty_lambda = default_penalty(stats, risk_q)
    problem = PortfolioProblem(mu, sigma, risk_q, int(budget_b), penalty_lambda)

    # x_i^2 = x_i, so the diagonal collects every linear term
    linear = risk_q * np.diag(sigma) - mu + penalty_lambda * (1 - 2 * problem.budget_b)
    quad = np.triu(2.0 * risk_q * sigma + 2.0 * penalty_lambda, 1)
    quad[np.diag_indices(n)] = linear
    offset = penalty_lambda * problem.budget_b ** 2

    return problem, Qubo(n=n, quad=quad, offset=offset)


def evaluate_bitstring(qubo: Qubo, bits: Bits) -> float:
    """Σ_{i≤j} quad[i][j]·bᵢ·bⱼ + offset."""
    x = np.asarray(bits_to_tuple(bits), dtype=float)
    if x.shape[0] != qubo.n:
        raise ValueError(f"length mismatch: {x.shape[0]} bits for n={qubo.n}")
    return float(x @ qubo.quad @ x + qubo.offset)


def qubo_to_ising(qubo: Qubo) -> IsingHamiltonian:
    """Substitute xᵢ = (1 − zᵢ)/2; energies agree on every bitstring."""
    quad = qubo.quad
    diag = np.diag(quad)
    upper = np.triu(quad, 1)
    row_col = upper.sum(axis=0) + upper.sum(axis=1)

    h = -diag / 2.0 - row_col / 4.0
    j = upper / 4.0
    offset = qubo.offset + diag.sum() / 2.0 + upper.sum() / 4.0
    return IsingHamiltonian(n=qubo.n, h=h, j=j, offset=offset)


def ising_energy(ising: IsingHamiltonian, bits: Bits) -> float:
    """Ising energy of the spin image zᵢ = 1 − 2bᵢ of ``bits``."""
    z = 1.0 - 2.0 * np.asarray(bits_to_tuple(bits), dtype=float)
    if z.shape[0] != ising.n:
        raise ValueError(f"length mismatch: {z.shape[0]} bits for n={ising.n}")
    return float(ising.offset + ising.h @ z + z @ ising.j @ z)


def _index_bits(n: int) -> List[np.ndarray]:
    indices = np.arange(1 << n, dtype=np.int64)
    return [((indices >> i) & 1).astype(bool) for i in range(n)]


def energy_table(qubo: Qubo) -> np.ndarray:
    """QUBO energy of every basis state, indexed like the statevector (qubit 0 = LSB)."""
    if qubo.n > MAX_EXACT_QUBITS:
        raise ValueError(
            f"problem too large for exact solver: n={qubo.n} > {MAX_EXACT_QUBITS}"
        )
    table = np.full(1 << qubo.n, qubo.offset, dtype=float)
    bits = _index_bits(qubo.n)
    for i in range(qubo.n):
        if qubo.quad[i, i]:
            table[bits[i]] += qubo.quad[i, i]
        for k in range(i + 1, qubo.n):
            if qubo.quad[i, k]:
                table[bits[i] & bits[k]] += qubo.quad[i, k]
    return table


def ising_table(ising: IsingHamiltonian) -> np.ndarray:
    """Ising energy of every basis state, same indexing as :func:`energy_table`."""
    if ising.n > MAX_EXACT_QUBITS:
        raise ValueError(
            f"problem too large for exact solver: n={ising.n} > {MAX_EXACT_QUBITS}"
        )
    spins = [1.0 - 2.0 * b for b in _index_bits(ising.n)]
    table = np.full(1 << ising.n, ising.offset, dtype=float)
    for i in range(ising.n):
        if ising.h[i]:
            table += ising.h[i] * spins[i]
    for a, b, coupling in ising.couplings():
        table += coupling * spins[a] * spins[b]
    return table


def lowest_bits(table: np.ndarray, n: int) -> GroundState:
    """Minimum of an energy table; ties go to the lexicographically smallest display string."""
    energy = table.min()
    candidates = np.flatnonzero(table == energy)
    bits = min(index_to_bits(int(k), n) for k in candidates)
    return GroundState(bits=bits, energy=float(energy))


def exact_ground_state(qubo: Qubo) -> GroundState:
    """Exhaustive minimum over all 2ⁿ bitstrings (the classical baseline)."""
    if qubo.n > MAX_EXACT_QUBITS:
        raise ValueError(
            f"problem too large for exact solver: n={qubo.n} > {MAX_EXACT_QUBITS}"
        )
    state = lowest_bits(energy_table(qubo), qubo.n)
    state.energy = evaluate_bitstring(qubo, state.bits)
    logger.debug("Exact ground state %s at %.12g", state.bits, state.energy)
    return state
