"""Optimizer options, solve results and sweep report models."""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .. import __version__
from ..config import DEFAULT_RISKS, config
from .circuit import CONFIG_LABELS
from .market import AssetStatistics
from .problem import GroundState

METHODS = ('nelder-mead', 'spsa')
INIT_MODES = ('uniform', 'zeros')
ALGORITHMS = ('vqe', 'qaoa')


@dataclass(frozen=True)
class OptimizerOptions:
    """Classical optimizer settings for one variational solve."""
    method: str = 'nelder-mead'
    max_evals: int = 2000
    f_tol: float = 1e-6
    seed: int = 0
    starts: int = 3
    init: str = 'uniform'
    shots: Optional[int] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown optimizer method: {self.method}")
        if self.max_evals < 1:
            raise ValueError(f"max_evals must be >= 1, got {self.max_evals}")
        if not self.f_tol > 0:
            raise ValueError(f"f_tol must be > 0, got {self.f_tol}")
        if self.starts < 1:
            raise ValueError(f"starts must be >= 1, got {self.starts}")
        if self.init not in INIT_MODES:
            raise ValueError(f"unknown init mode: {self.init}")
        if self.shots is not None and self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")

    @classmethod
    def from_config(cls, **overrides: Any) -> 'OptimizerOptions':
        """Defaults from the ``optimizer`` config section, then ``overrides``."""
        values = {
            'method': config.get('optimizer.method', 'nelder-mead'),
            'max_evals': config.get('optimizer.max_evals', 2000),
            'f_tol': config.get('optimizer.f_tol', 1e-6),
            'starts': config.get('optimizer.starts', 3),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'max_evals': self.max_evals,
            'f_tol': self.f_tol,
            'seed': self.seed,
            'starts': self.starts,
            'init': self.init,
            'shots': self.shots,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OptimizerOptions':
        return cls(**{k: data[k] for k in cls().to_dict() if k in data})


@dataclass
class SolveResult:
    """Outcome of one VQE or QAOA solve."""
    params: np.ndarray
    energy: float
    bits: str
    evals: int
    converged: bool
    start_energies: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'params': [float(p) for p in self.params],
            'energy': float(self.energy),
            'bits': self.bits,
            'evals': int(self.evals),
            'converged': bool(self.converged),
            'start_energies': [float(e) for e in self.start_energies],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SolveResult':
        return cls(
            params=np.asarray(data['params'], dtype=float),
            energy=data['energy'],
            bits=data['bits'],
            evals=data['evals'],
            converged=data['converged'],
            start_energies=data.get('start_energies', []),
        )


@dataclass
class SweepGrid:
    """Experiment grid: risks x configs x algorithms over one asset universe."""
    stats: AssetStatistics
    budget: int
    risks: List[float] = field(default_factory=lambda: list(DEFAULT_RISKS))
    configs: List[str] = field(default_factory=lambda: list(CONFIG_LABELS))
    algorithms: List[str] = field(default_factory=lambda: list(ALGORITHMS))
    penalty: Optional[float] = None
    base_seed: int = 42
    options: OptimizerOptions = field(default_factory=OptimizerOptions.from_config)
    tickers: List[str] = field(default_factory=list)
    workers: Optional[int] = None
    source: Optional[str] = None  # price file the statistics came from; None = sample

    def __post_init__(self):
        if not self.risks or not self.configs or not self.algorithms:
            raise ValueError("sweep grid needs at least one risk, config and algorithm")
        if any(not 0.0 <= r <= 1.0 for r in self.risks):
            raise ValueError(f"risks must lie in [0, 1]: {self.risks}")
        unknown = [c for c in self.configs if c not in CONFIG_LABELS]
        if unknown:
            raise ValueError(f"unknown config label: {', '.join(unknown)}")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ValueError(f"unknown algorithm: {', '.join(bad)}")
        if not 0 <= self.budget <= self.stats.n_assets:
            raise ValueError(f"infeasible budget: {self.budget} not in [0, {self.stats.n_assets}]")

    @property
    def size(self) -> int:
        return len(self.risks) * len(self.configs) * len(self.algorithms)


@dataclass
class ExperimentRecord:
    """One (config, risk, algorithm) cell of a sweep, compared against the exact solver."""
    label: str
    risk: float
    algorithm: str
    energy: Optional[float]
    bits: Optional[str]
    feasible: bool
    matched: bool
    energy_gap: Optional[float]
    evals: int
    seed: int
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def sort_key(self) -> Tuple[float, str, str]:
        return (self.risk, self.algorithm, self.label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'label': self.label,
            'risk': self.risk,
            'algorithm': self.algorithm,
            'energy': self.energy,
            'bits': self.bits,
            'feasible': self.feasible,
            'matched': self.matched,
            'energy_gap': self.energy_gap,
            'evals': self.evals,
            'seed': self.seed,
            'error': self.error,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentRecord':
        return cls(
            label=data['label'],
            risk=data['risk'],
            algorithm=data['algorithm'],
            energy=data.get('energy'),
            bits=data.get('bits'),
            feasible=data.get('feasible', False),
            matched=data.get('matched', False),
            energy_gap=data.get('energy_gap'),
            evals=data.get('evals', 0),
            seed=data.get('seed', 0),
            error=data.get('error'),
        )


@dataclass
class RunManifest:
    """Everything needed to rerun a sweep; embedded in every JSON report."""
    prices: Optional[str]
    tickers: List[str]
    budget: int
    penalty: Optional[float]
    risks: List[float]
    configs: List[str]
    algorithms: List[str]
    base_seed: int
    options: Dict[str, Any]
    tool_version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat(timespec='seconds'))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'prices': self.prices,
            'tickers': self.tickers,
            'budget': self.budget,
            'penalty': self.penalty,
            'risks': self.risks,
            'configs': self.configs,
            'algorithms': self.algorithms,
            'base_seed': self.base_seed,
            'options': self.options,
            'tool_version': self.tool_version,
            'timestamp': self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        return cls(
            prices=data.get('prices'),
            tickers=list(data.get('tickers', [])),
            budget=data['budget'],
            penalty=data.get('penalty'),
            risks=list(data['risks']),
            configs=list(data['configs']),
            algorithms=list(data['algorithms']),
            base_seed=data['base_seed'],
            options=dict(data.get('options', {})),
            tool_version=data.get('tool_version', __version__),
            timestamp=data.get('timestamp', ''),
        )

    def reproducible_dict(self) -> Dict[str, Any]:
        """The manifest without its timestamp."""
        data = self.to_dict()
        data.pop('timestamp')
        return data


@dataclass
class SweepReport:
    """All records of a sweep plus the per-risk exact baselines."""
    records: List[ExperimentRecord]
    exact: Dict[float, GroundState]
    match_rates: Dict[Tuple[float, str], Optional[float]] = field(default_factory=dict)
    manifest: Optional[RunManifest] = None

    @property
    def risks(self) -> List[float]:
        return sorted(self.exact)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'records': [r.to_dict() for r in self.records],
            'exact': [
                {'risk': risk, **self.exact[risk].to_dict()} for risk in self.risks
            ],
            'match_rates': [
                {'risk': risk, 'algorithm': algo, 'rate': rate}
                for (risk, algo), rate in sorted(self.match_rates.items())
            ],
            'manifest': self.manifest.to_dict() if self.manifest else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SweepReport':
        manifest = data.get('manifest')
        return cls(
            records=[ExperimentRecord.from_dict(r) for r in data['records']],
            exact={
                e['risk']: GroundState(bits=e['bits'], energy=e['energy'])
                for e in data['exact']
            },
            match_rates={
                (m['risk'], m['algorithm']): m['rate'] for m in data.get('match_rates', [])
            },
            manifest=RunManifest.from_dict(manifest) if manifest else None,
        )
