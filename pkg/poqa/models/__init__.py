"""
Domain models for PO-QA.

Plain dataclasses with ``to_dict`` / ``from_dict`` serialization.
"""

from .circuit import (
    CONFIG_LABELS,
    CONFIG_TABLE,
    AnsatzConfig,
    Entangler,
    Gate,
    GateKind,
    Parameter,
    ParamCircuit,
    Rotation,
    Structure,
)
from .market import AssetStatistics, PriceSeries
from .problem import (
    GroundState,
    IsingHamiltonian,
    PortfolioProblem,
    Qubo,
    bits_to_index,
    bits_to_str,
    index_to_bits,
)
from .results import (
    ExperimentRecord,
    OptimizerOptions,
    RunManifest,
    SolveResult,
    SweepGrid,
    SweepReport,
)

__all__ = [
    'CONFIG_LABELS',
    'CONFIG_TABLE',
    'AnsatzConfig',
    'AssetStatistics',
    'Entangler',
    'ExperimentRecord',
    'Gate',
    'GateKind',
    'GroundState',
    'IsingHamiltonian',
    'OptimizerOptions',
    'Parameter',
    'ParamCircuit',
    'PortfolioProblem',
    'PriceSeries',
    'Qubo',
    'Rotation',
    'RunManifest',
    'SolveResult',
    'Structure',
    'SweepGrid',
    'SweepReport',
    'bits_to_index',
    'bits_to_str',
    'index_to_bits',
]
