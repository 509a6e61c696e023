"""Portfolio problem, QUBO and Ising models.

Bit convention, used everywhere in the package: asset ``i`` is qubit ``i``;
qubit 0 is the least-significant bit of a statevector index; bitstrings are
displayed with asset 0 first.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Union

import numpy as np

Bits = Union[str, Sequence[int]]


def bits_to_tuple(bits: Bits) -> tuple:
    """Normalize ``"0110"`` or ``[0, 1, 1, 0]`` to a tuple of ints."""
    if isinstance(bits, str):
        if any(c not in '01' for c in bits):
            raise ValueError(f"bitstring must contain only 0/1: {bits!r}")
        return tuple(int(c) for c in bits)
    values = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in values):
        raise ValueError(f"bits must be 0/1: {list(bits)!r}")
    return values


def bits_to_str(bits: Bits) -> str:
    return ''.join(str(b) for b in bits_to_tuple(bits))


def index_to_bits(index: int, n: int) -> str:
    """Display string for a statevector index: asset 0 (the LSB) first."""
    return ''.join(str((index >> i) & 1) for i in range(n))


def bits_to_index(bits: Bits) -> int:
    return sum(b << i for i, b in enumerate(bits_to_tuple(bits)))


@dataclass
class PortfolioProblem:
    """Budget-constrained mean-variance selection problem."""
    mu: np.ndarray
    sigma: np.ndarray
    risk_q: float
    budget_b: int
    penalty_lambda: float

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float).reshape(-1)
        self.sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        n = self.mu.shape[0]

        if self.sigma.shape != (n, n):
            raise ValueError(
                f"dimension mismatch: mu has {n} entries, sigma is {self.sigma.shape}"
            )
        if self.risk_q < 0:
            raise ValueError(f"risk factor must be >= 0, got {self.risk_q}")
        if int(self.budget_b) != self.budget_b or not 0 <= self.budget_b <= n:
            raise ValueError(f"infeasible budget: {self.budget_b} not in [0, {n}]")
        self.budget_b = int(self.budget_b)
        if not self.penalty_lambda > 0:
            raise ValueError(f"penalty weight must be > 0, got {self.penalty_lambda}")

    @property
    def n(self) -> int:
        return int(self.mu.shape[0])

    def objective(self, bits: Bits) -> float:
        """Closed-form E(x) = q x'Sx - mu'x + lambda (sum x - B)^2."""
        x = np.asarray(bits_to_tuple(bits), dtype=float)
        if x.shape[0] != self.n:
            raise ValueError(f"length mismatch: {x.shape[0]} bits for {self.n} assets")
        violation = x.sum() - self.budget_b
        return float(
            self.risk_q * x @ self.sigma @ x - self.mu @ x
            + self.penalty_lambda * violation ** 2
        )

    def is_feasible(self, bits: Bits) -> bool:
        return sum(bits_to_tuple(bits)) == self.budget_b

    def selected_assets(self, bits: Bits, tickers: Sequence[str]) -> List[str]:
        return [t for t, b in zip(tickers, bits_to_tuple(bits)) if b]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mu': self.mu.tolist(),
            'sigma': self.sigma.tolist(),
            'risk_q': self.risk_q,
            'budget_b': self.budget_b,
            'penalty_lambda': self.penalty_lambda,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PortfolioProblem':
        return cls(
            mu=data['mu'],
            sigma=data['sigma'],
            risk_q=data['risk_q'],
            budget_b=data['budget_b'],
            penalty_lambda=data['penalty_lambda'],
        )


@dataclass
class Qubo:
    """Upper-triangular QUBO; the diagonal carries the linear terms."""
    n: int
    quad: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.quad = np.atleast_2d(np.asarray(self.quad, dtype=float))
        if self.quad.shape != (self.n, self.n):
            raise ValueError(f"dimension mismatch: quad is {self.quad.shape}, n={self.n}")
        if np.any(np.tril(self.quad, -1) != 0):
            raise ValueError("quad must be upper-triangular")
        if not np.all(np.isfinite(self.quad)) or not np.isfinite(self.offset):
            raise ValueError("QUBO coefficients must be finite")
        self.offset = float(self.offset)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, offset: float = 0.0) -> 'Qubo':
        """Fold an arbitrary square matrix into upper-triangular form."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        upper = np.triu(matrix) + np.triu(matrix.T, 1)
        return cls(n=matrix.shape[0], quad=upper, offset=offset)

    def to_dict(self) -> Dict[str, Any]:
        return {'n': self.n, 'quad': self.quad.tolist(), 'offset': self.offset}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Qubo':
        return cls(n=data['n'], quad=data['quad'], offset=data.get('offset', 0.0))


@dataclass
class IsingHamiltonian:
    """Diagonal Ising form: offset + sum h_i z_i + sum_{i<j} J_ij z_i z_j."""
    n: int
    h: np.ndarray
    j: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=float).reshape(-1)
        self.j = np.atleast_2d(np.asarray(self.j, dtype=float))
        if self.h.shape != (self.n,) or self.j.shape != (self.n, self.n):
            raise ValueError("dimension mismatch in Ising coefficients")
        if np.any(np.tril(self.j) != 0):
            raise ValueError("couplings must be strictly upper-triangular")
        self.offset = float(self.offset)

    def couplings(self) -> List[tuple]:
        """Non-zero couplings as ``(i, j, J_ij)`` in row-major order."""
        rows, cols = np.nonzero(self.j)
        return [(int(a), int(b), float(self.j[a, b])) for a, b in zip(rows, cols)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'h': self.h.tolist(),
            'j': self.j.tolist(),
            'offset': self.offset,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IsingHamiltonian':
        return cls(n=data['n'], h=data['h'], j=data['j'], offset=data.get('offset', 0.0))


@dataclass
class GroundState:
    """Minimum-energy bitstring of a QUBO."""
    bits: str
    energy: float

    def __post_init__(self):
        self.bits = bits_to_str(self.bits)
        self.energy = float(self.energy)

    def to_dict(self) -> Dict[str, Any]:
        return {'bits': self.bits, 'energy': self.energy}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GroundState':
        return cls(bits=data['bits'], energy=data['energy'])
