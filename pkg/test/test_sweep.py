"""
Unit tests for the experiment grid and its aggregations.
"""
import os
import unittest
from unittest import mock

from poqa.config import DEFAULT_RISKS
from poqa.core.market_data import compute_returns, estimate_statistics, sample_prices
from poqa.core.sweep import (
    circuit_key,
    config_match_rates,
    energy_spread,
    grid_from_manifest,
    match_rate_rows,
    match_rates,
    motivational_subset,
    reps_match_rates,
    run_sweep,
    stable_seed,
)
from poqa.models.circuit import CONFIG_LABELS, AnsatzConfig
from poqa.models.problem import GroundState
from poqa.models.results import (
    ExperimentRecord,
    OptimizerOptions,
    RunManifest,
    SweepGrid,
    SweepReport,
)

SLOW = os.environ.get('POQA_SLOW_TESTS') == '1'
TICKERS = ['TSLA', 'GOOG', 'FSLR']


def small_grid(**overrides):
    series = sample_prices().select(TICKERS)
    values = dict(
        stats=estimate_statistics(compute_returns(series)),
        budget=1,
        risks=[0.1, 0.5, 0.9],
        configs=['B', 'H', 'E'],
        algorithms=['vqe', 'qaoa'],
        base_seed=42,
        options=OptimizerOptions(max_evals=120, starts=1),
        tickers=TICKERS,
        workers=1,
    )
    values.update(overrides)
    return SweepGrid(**values)


def synthetic_report(risks=DEFAULT_RISKS, labels=CONFIG_LABELS):
    """A full-size report without running any solver: VQE matches on B..G, QAOA everywhere."""
    records = []
    exact = {}
    for risk in risks:
        exact[risk] = GroundState(bits='1100', energy=-risk)
        for algorithm in ('vqe', 'qaoa'):
            for label in labels:
                matched = algorithm == 'qaoa' or label in 'BCDEFG'
                records.append(ExperimentRecord(
                    label=label, risk=risk, algorithm=algorithm,
                    energy=-risk + (0.0 if matched else 0.5), bits='1100' if matched else '0011',
                    feasible=True, matched=matched, energy_gap=0.0 if matched else 0.5,
                    evals=10, seed=1,
                ))
    report = SweepReport(records=records, exact=exact)
    report.match_rates = match_rates(report)
    return report


class TestSeeds(unittest.TestCase):
    """Tests for per-cell seeds."""

    def test_stable_seed(self):
        a = stable_seed(42, 'B', 0.5, 'vqe')
        self.assertEqual(a, stable_seed(42, 'B', 0.5, 'vqe'))
        self.assertTrue(0 <= a < 2 ** 31)
        self.assertNotEqual(a, stable_seed(42, 'C', 0.5, 'vqe'))
        self.assertNotEqual(a, stable_seed(43, 'B', 0.5, 'vqe'))
        self.assertNotEqual(a, stable_seed(42, 'B', 0.6, 'vqe'))

    def test_circuit_key(self):
        """QAOA only depends on the circuit depth."""
        self.assertEqual(circuit_key('vqe', 'B'), 'B')
        self.assertEqual(circuit_key('qaoa', 'B'), 'reps=3')
        self.assertEqual(circuit_key('qaoa', 'H'), circuit_key('qaoa', 'J'))
        self.assertNotEqual(circuit_key('qaoa', 'B'), circuit_key('qaoa', 'E'))


class TestRunSweep(unittest.TestCase):
    """Tests for running a small grid."""

    @classmethod
    def setUpClass(cls):
        cls.grid = small_grid()
        cls.report = run_sweep(cls.grid)

    def test_record_count_and_order(self):
        records = self.report.records
        self.assertEqual(len(records), self.grid.size)
        self.assertEqual(len(records), 18)
        keys = [r.sort_key() for r in records]
        self.assertEqual(keys, sorted(keys))
        self.assertTrue(all(r.ok for r in records))

    def test_variational_bound(self):
        for record in self.report.records:
            self.assertGreaterEqual(record.energy_gap, -1e-9)
            self.assertEqual(record.matched, record.bits == self.report.exact[record.risk].bits)

    def test_exact_energy_non_decreasing(self):
        energies = [self.report.exact[risk].energy for risk in self.report.risks]
        for low, high in zip(energies, energies[1:]):
            self.assertLessEqual(low, high + 1e-15)

    def test_qaoa_identical_within_reps(self):
        """B and H share reps = 3, so their QAOA records coincide."""
        by_key = {(r.risk, r.algorithm, r.label): r for r in self.report.records}
        for risk in self.grid.risks:
            b, h, e = (by_key[(risk, 'qaoa', label)] for label in 'BHE')
            self.assertEqual((b.energy, b.bits, b.seed, b.evals), (h.energy, h.bits, h.seed, h.evals))
            self.assertNotEqual(b.seed, e.seed)

    def test_match_rates(self):
        for (risk, algorithm), rate in self.report.match_rates.items():
            cell = [r for r in self.report.records if r.risk == risk and r.algorithm == algorithm]
            expected = round(100.0 * sum(r.matched for r in cell) / len(cell), 1)
            self.assertEqual(rate, expected)
        self.assertEqual(len(self.report.match_rates), 6)

    def test_manifest(self):
        manifest = self.report.manifest
        self.assertEqual(manifest.tickers, TICKERS)
        self.assertEqual(manifest.risks, [0.1, 0.5, 0.9])
        self.assertIsNone(manifest.prices)
        self.assertEqual(manifest.options['max_evals'], 120)

    def test_manifest_rerun_reproduces(self):
        rerun = run_sweep(grid_from_manifest(self.report.manifest, workers=1))
        self.assertEqual(rerun.records, self.report.records)
        self.assertEqual(rerun.exact, self.report.exact)
        self.assertEqual(
            rerun.manifest.reproducible_dict(), self.report.manifest.reproducible_dict(),
        )

    def test_adding_cells_keeps_results(self):
        """A larger grid reproduces the records it shares with a smaller one."""
        smaller = run_sweep(small_grid(risks=[0.5], configs=['H']))
        shared = {(r.risk, r.algorithm, r.label): r for r in self.report.records}
        for record in smaller.records:
            self.assertEqual(record, shared[(record.risk, record.algorithm, record.label)])

    def test_worker_pool_matches_inline(self):
        grid = small_grid(risks=[0.5], configs=['C'], workers=2)
        pooled = run_sweep(grid)
        inline = run_sweep(small_grid(risks=[0.5], configs=['C'], workers=1))
        self.assertEqual(pooled.records, inline.records)


class TestSweepErrors(unittest.TestCase):
    """Tests for failing cells."""

    def test_failed_cell_is_recorded(self):
        def failing(qubo, config, opts):
            raise FloatingPointError("simulated divergence")

        grid = small_grid(risks=[0.5], configs=['B'], algorithms=['vqe', 'qaoa'])
        with mock.patch('poqa.core.sweep.vqe_solve', side_effect=failing):
            with self.assertLogs('poqa.core.sweep', level='WARNING'):
                report = run_sweep(grid)

        vqe = [r for r in report.records if r.algorithm == 'vqe']
        self.assertEqual(len(vqe), 1)
        self.assertFalse(vqe[0].ok)
        self.assertIn('simulated divergence', vqe[0].error)
        self.assertIsNone(vqe[0].energy)

        rows = {(row.risk, row.algorithm): row for row in match_rate_rows(report)}
        self.assertEqual(rows[(0.5, 'vqe')].counted, 0)
        self.assertEqual(rows[(0.5, 'vqe')].errored, 1)
        self.assertIsNone(rows[(0.5, 'vqe')].rate)
        self.assertIsNone(report.match_rates[(0.5, 'vqe')])
        self.assertEqual(rows[(0.5, 'qaoa')].counted, 1)

    def test_grid_validation(self):
        with self.assertRaisesRegex(ValueError, "unknown config label"):
            small_grid(configs=['Z'])
        with self.assertRaises(ValueError):
            small_grid(risks=[1.5])
        with self.assertRaises(ValueError):
            small_grid(algorithms=[])
        with self.assertRaisesRegex(ValueError, "infeasible budget"):
            small_grid(budget=4)

    def test_grid_options_from_config(self):
        grid = SweepGrid(stats=small_grid().stats, budget=1)
        self.assertEqual(grid.options, OptimizerOptions.from_config())
        self.assertEqual(OptimizerOptions().starts, 3)


class TestAggregations(unittest.TestCase):
    """Tests for match rates, summaries and the motivational subset."""

    def setUp(self):
        self.report = synthetic_report()

    def test_grid_size(self):
        self.assertEqual(len(self.report.records), 216)

    def test_match_rates(self):
        self.assertEqual(self.report.match_rates[(0.3, 'qaoa')], 100.0)
        self.assertEqual(self.report.match_rates[(0.3, 'vqe')], 50.0)

    def test_empty_report(self):
        with self.assertRaisesRegex(ValueError, "empty report"):
            match_rates(SweepReport(records=[], exact={}))

    def test_config_match_rates(self):
        rates = config_match_rates(self.report)
        self.assertEqual(rates[('B', 'vqe')], 100.0)
        self.assertEqual(rates[('K', 'vqe')], 0.0)
        self.assertEqual(rates[('K', 'qaoa')], 100.0)
        self.assertEqual(len(rates), 24)

    def test_reps_match_rates(self):
        rates = reps_match_rates(self.report)
        # reps 3: B C D match, H I J do not
        self.assertEqual(rates[(3, 'vqe')], 50.0)
        self.assertEqual(rates[(5, 'qaoa')], 100.0)

    def test_energy_spread(self):
        spread = energy_spread(self.report)
        self.assertAlmostEqual(spread[(0.5, 'vqe')]['range'], 0.5, places=12)
        self.assertAlmostEqual(spread[(0.5, 'vqe')]['std'], 0.25, places=12)
        self.assertEqual(spread[(0.5, 'qaoa')]['range'], 0.0)
        self.assertEqual(spread[(0.5, 'qaoa')]['min'], -0.5)

    def test_motivational_subset(self):
        subset = motivational_subset(self.report)
        self.assertEqual(len(subset.records), 72)
        self.assertEqual(subset.risks, [0.1, 0.5, 0.9])
        self.assertEqual(set(subset.match_rates), {
            (risk, algo) for risk in (0.1, 0.5, 0.9) for algo in ('vqe', 'qaoa')
        })

    def test_motivational_subset_manifest(self):
        report = synthetic_report()
        report.manifest = RunManifest(
            prices=None, tickers=['TSLA', 'GOOG', 'FSLR', 'AAPL'], budget=2, penalty=None,
            risks=list(DEFAULT_RISKS), configs=list(CONFIG_LABELS), algorithms=['vqe', 'qaoa'],
            base_seed=42, options=OptimizerOptions().to_dict(),
        )
        subset = motivational_subset(report)
        self.assertEqual(subset.manifest.risks, [0.1, 0.5, 0.9])
        self.assertEqual(subset.manifest.configs, list(CONFIG_LABELS))
        self.assertEqual(report.manifest.risks, list(DEFAULT_RISKS))
        self.assertIsNone(motivational_subset(synthetic_report()).manifest)

    def test_motivational_subset_needs_risks(self):
        report = synthetic_report(risks=[0.1, 0.9])
        with self.assertRaisesRegex(ValueError, "risk not in sweep"):
            motivational_subset(report)


@unittest.skipUnless(SLOW, "full default sweep; set POQA_SLOW_TESTS=1")
class TestDefaultSweep(unittest.TestCase):
    """The full 216-run grid on the 8-asset sample series."""

    @classmethod
    def setUpClass(cls):
        series = sample_prices()
        cls.report = run_sweep(SweepGrid(
            stats=estimate_statistics(compute_returns(series)),
            budget=series.n_assets // 2,
            options=OptimizerOptions.from_config(),
            tickers=list(series.tickers),
        ))

    def test_size(self):
        self.assertEqual(len(self.report.records), 216)
        self.assertEqual(len(self.report.exact), 9)

    def test_variational_bound(self):
        for record in self.report.records:
            self.assertTrue(record.ok, record.error)
            self.assertGreaterEqual(record.energy_gap, -1e-9)

    def test_exact_energy_non_decreasing(self):
        energies = [self.report.exact[risk].energy for risk in self.report.risks]
        for low, high in zip(energies, energies[1:]):
            self.assertLessEqual(low, high + 1e-15)

    def test_qaoa_classes_identical(self):
        by_cell = {}
        for record in self.report.records:
            if record.algorithm == 'qaoa':
                reps = AnsatzConfig.from_label(record.label).reps
                by_cell.setdefault((record.risk, reps), set()).add((record.energy, record.bits))
        for outcomes in by_cell.values():
            self.assertEqual(len(outcomes), 1)

    def test_qaoa_matches_at_least_as_often(self):
        matched = {'vqe': 0, 'qaoa': 0}
        for record in self.report.records:
            matched[record.algorithm] += record.matched
        self.assertGreaterEqual(matched['qaoa'], matched['vqe'])


if __name__ == '__main__':
    unittest.main()
