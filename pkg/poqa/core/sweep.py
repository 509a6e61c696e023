"""Experiment grid: algorithms x configs B..M x risk factors against the exact solver."""
import hashlib
import logging
from collections import defaultdict
from dataclasses import replace
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ..config import worker_count
from ..models.circuit import AnsatzConfig
from ..models.problem import GroundState, PortfolioProblem, Qubo
from ..models.results import (
    ExperimentRecord,
    OptimizerOptions,
    RunManifest,
    SolveResult,
    SweepGrid,
    SweepReport,
)
from .encoding import build_portfolio_qubo, exact_ground_state, qubo_to_ising
from .market_data import compute_returns, estimate_statistics, load_prices, sample_prices
from .solvers import qaoa_solve, vqe_solve

logger = logging.getLogger(__name__)

MOTIVATIONAL_RISKS = (0.1, 0.5, 0.9)
RISK_TOL = 1e-9


class MatchRate(NamedTuple):
    """Matched share of one (risk, algorithm) cell; ``rate`` is None when every run errored."""
    risk: float
    algorithm: str
    rate: Optional[float]
    matched: int
    counted: int
    errored: int


class _Cell(NamedTuple):
    """One unique solve; QAOA cells are shared by every config with the same reps."""
    risk: float
    algorithm: str
    key: str
    label: str
    seed: int
    qubo: Qubo
    options: OptimizerOptions


def stable_seed(base_seed: int, key: str, risk: float, algorithm: str) -> int:
    """Seed for one grid cell; independent of which other cells exist."""
    text = f"{base_seed}|{key}|{risk!r}|{algorithm}"
    digest = hashlib.sha256(text.encode('utf-8')).digest()
    return int.from_bytes(digest[:4], 'big') & 0x7FFFFFFF


def circuit_key(algorithm: str, label: str) -> str:
    """What determines the circuit: the full config for VQE, only the depth for QAOA."""
    if algorithm == 'qaoa':
        return f"reps={AnsatzConfig.from_label(label).reps}"
    return label


def _run_cell(cell: _Cell) -> Tuple[Tuple[float, str, str], Optional[SolveResult], Optional[str]]:
    index = (cell.risk, cell.algorithm, cell.key)
    options = OptimizerOptions(**{**cell.options.to_dict(), 'seed': cell.seed})
    try:
        config = AnsatzConfig.from_label(cell.label)
        if cell.algorithm == 'vqe':
            result = vqe_solve(cell.qubo, config, options)
        else:
            result = qaoa_solve(qubo_to_ising(cell.qubo), config.reps, options)
        return index, result, None
    except Exception as e:  # recorded, the sweep carries on
        return index, None, f"{type(e).__name__}: {e}"


def _execute(cells: List[_Cell], workers: int) -> Iterable:
    if workers <= 1 or len(cells) <= 1:
        return map(_run_cell, cells)
    pool = ProcessPoolExecutor(max_workers=min(workers, len(cells)))
    try:
        return list(pool.map(_run_cell, cells))
    finally:
        pool.shutdown()


def build_manifest(grid: SweepGrid) -> RunManifest:
    return RunManifest(
        prices=grid.source,
        tickers=list(grid.tickers),
        budget=grid.budget,
        penalty=grid.penalty,
        risks=list(grid.risks),
        configs=list(grid.configs),
        algorithms=list(grid.algorithms),
        base_seed=grid.base_seed,
        options=grid.options.to_dict(),
    )


def run_sweep(
    grid: SweepGrid,
    progress: Optional[Callable[[ExperimentRecord], None]] = None,
) -> SweepReport:
    """
    Solve every (risk, config, algorithm) cell and compare it with the exact ground state.

    Each risk gets one problem and one exact solve. Per-cell seeds come from
    :func:`stable_seed`, and records are ordered by (risk, algorithm, label)
    however the cells were scheduled.
    """
    problems: Dict[float, Tuple[PortfolioProblem, Qubo]] = {}
    exact: Dict[float, GroundState] = {}
    cells: Dict[Tuple[float, str, str], _Cell] = {}

    for risk in grid.risks:
        problem, qubo = build_portfolio_qubo(grid.stats, risk, grid.budget, grid.penalty)
        problems[risk] = (problem, qubo)
        exact[risk] = exact_ground_state(qubo)
        logger.info("risk %.3g: exact ground state %s, energy %.10g",
                    risk, exact[risk].bits, exact[risk].energy)

        for algorithm in grid.algorithms:
            for label in grid.configs:
                key = circuit_key(algorithm, label)
                if (risk, algorithm, key) in cells:
                    continue
                seed = stable_seed(grid.base_seed, key, risk, algorithm)
                cells[(risk, algorithm, key)] = _Cell(
                    risk, algorithm, key, label, seed, qubo, grid.options,
                )

    workers = worker_count(grid.workers)
    logger.info("Running %d unique solves for %d grid cells on %d worker(s)",
                len(cells), grid.size, workers)
    outcomes = {
        index: (result, error)
        for index, result, error in _execute(list(cells.values()), workers)
    }

    records = []
    for risk in grid.risks:
        problem, _ = problems[risk]
        baseline = exact[risk]
        for algorithm in grid.algorithms:
            for label in grid.configs:
                key = circuit_key(algorithm, label)
                result, error = outcomes[(risk, algorithm, key)]
                record = _record(label, risk, algorithm, cells[(risk, algorithm, key)].seed,
                                 problem, baseline, result, error)
                records.append(record)
                if progress:
                    progress(record)

    records.sort(key=ExperimentRecord.sort_key)
    report = SweepReport(records=records, exact=exact, manifest=build_manifest(grid))
    report.match_rates = match_rates(report)
    return report


def _record(
    label: str,
    risk: float,
    algorithm: str,
    seed: int,
    problem: PortfolioProblem,
    baseline: GroundState,
    result: Optional[SolveResult],
    error: Optional[str],
) -> ExperimentRecord:
    if result is None:
        logger.warning("%s %s at risk %.3g failed: %s", algorithm, label, risk, error)
        return ExperimentRecord(
            label=label, risk=risk, algorithm=algorithm, energy=None, bits=None,
            feasible=False, matched=False, energy_gap=None, evals=0, seed=seed, error=error,
        )

    record = ExperimentRecord(
        label=label,
        risk=risk,
        algorithm=algorithm,
        energy=result.energy,
        bits=result.bits,
        feasible=problem.is_feasible(result.bits),
        matched=result.bits == baseline.bits,
        energy_gap=result.energy - baseline.energy,
        evals=result.evals,
        seed=seed,
    )
    logger.info("%s %s risk %.3g: energy %.10g bits %s matched=%s",
                algorithm, label, risk, record.energy, record.bits, record.matched)
    return record


def match_rate_rows(report: SweepReport) -> List[MatchRate]:
    """Matched share per (risk, algorithm); errored runs are left out of the denominator."""
    if not report.records:
        raise ValueError("empty report")

    counts: Dict[Tuple[float, str], List[int]] = defaultdict(lambda: [0, 0, 0])
    for record in report.records:
        tally = counts[(record.risk, record.algorithm)]
        if record.ok:
            tally[0] += record.matched
            tally[1] += 1
        else:
            tally[2] += 1

    rows = []
    for (risk, algorithm), (matched, counted, errored) in sorted(counts.items()):
        rate = round(100.0 * matched / counted, 1) if counted else None
        rows.append(MatchRate(risk, algorithm, rate, matched, counted, errored))
    return rows


def match_rates(report: SweepReport) -> Dict[Tuple[float, str], Optional[float]]:
    """Percentage (one decimal) of configs whose bitstring equals the exact one; None without data."""
    return {(row.risk, row.algorithm): row.rate for row in match_rate_rows(report)}


def _grouped_rates(report: SweepReport, group: Callable[[ExperimentRecord], object]) -> Dict:
    if not report.records:
        raise ValueError("empty report")
    counts: Dict[Tuple[object, str], List[int]] = defaultdict(lambda: [0, 0])
    for record in report.records:
        if record.ok:
            tally = counts[(group(record), record.algorithm)]
            tally[0] += record.matched
            tally[1] += 1
    return {
        key: round(100.0 * matched / counted, 1)
        for key, (matched, counted) in sorted(counts.items())
    }


def config_match_rates(report: SweepReport) -> Dict[Tuple[str, str], float]:
    """Match percentage per (config label, algorithm) across all risks."""
    return _grouped_rates(report, lambda r: r.label)


def reps_match_rates(report: SweepReport) -> Dict[Tuple[int, str], float]:
    """Match percentage per (circuit depth, algorithm)."""
    return _grouped_rates(report, lambda r: AnsatzConfig.from_label(r.label).reps)


def energy_spread(report: SweepReport) -> Dict[Tuple[float, str], Dict[str, float]]:
    """How much converged energies vary across configs, per (risk, algorithm)."""
    energies: Dict[Tuple[float, str], List[float]] = defaultdict(list)
    for record in report.records:
        if record.ok:
            energies[(record.risk, record.algorithm)].append(record.energy)

    spread = {}
    for key, values in sorted(energies.items()):
        values = np.asarray(values)
        spread[key] = {
            'min': float(values.min()),
            'max': float(values.max()),
            'range': float(values.max() - values.min()),
            'std': float(values.std()),
        }
    return spread


def _find_risk(risks: Sequence[float], risk: float) -> Optional[float]:
    for candidate in risks:
        if abs(candidate - risk) <= RISK_TOL:
            return candidate
    return None


def motivational_subset(
    report: SweepReport,
    risks: Sequence[float] = MOTIVATIONAL_RISKS,
) -> SweepReport:
    """The low / middle / high risk view of a sweep (0.1, 0.5, 0.9 by default)."""
    present = []
    for risk in risks:
        found = _find_risk(report.risks, risk)
        if found is None:
            raise ValueError(f"risk not in sweep: {risk}")
        present.append(found)

    keep = set(present)
    subset = SweepReport(
        records=[r for r in report.records if r.risk in keep],
        exact={risk: report.exact[risk] for risk in present},
        manifest=replace(report.manifest, risks=present) if report.manifest else None,
    )
    subset.match_rates = {
        key: rate for key, rate in report.match_rates.items() if key[0] in keep
    }
    return subset


def grid_from_manifest(manifest: RunManifest, workers: Optional[int] = None) -> SweepGrid:
    """Rebuild the grid a stored manifest describes."""
    if manifest.prices:
        series = load_prices(manifest.prices, manifest.tickers or None)
    else:
        series = sample_prices()
        if manifest.tickers:
            series = series.select(manifest.tickers)
    stats = estimate_statistics(compute_returns(series))
    return SweepGrid(
        stats=stats,
        budget=manifest.budget,
        risks=list(manifest.risks),
        configs=list(manifest.configs),
        algorithms=list(manifest.algorithms),
        penalty=manifest.penalty,
        base_seed=manifest.base_seed,
        options=OptimizerOptions.from_dict(manifest.options),
        tickers=list(series.tickers),
        workers=workers,
        source=manifest.prices,
    )
