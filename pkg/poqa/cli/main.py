"""Main CLI module for PO-QA."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .. import __version__
from ..config import config
from ..core.encoding import build_portfolio_qubo, exact_ground_state, qubo_to_ising
from ..core.market_data import (
    compute_returns,
    estimate_statistics,
    generate_synthetic,
    load_prices,
    sample_prices,
    save_prices,
)
from ..core.solvers import qaoa_solve, vqe_solve
from ..core.sweep import grid_from_manifest, motivational_subset, run_sweep
from ..models.circuit import CONFIG_LABELS, AnsatzConfig
from ..models.market import PriceSeries
from ..models.results import ALGORITHMS, METHODS, OptimizerOptions, SweepGrid
from ..storage.reports import EXTENSIONS, FORMATS, ReportWriter, emit_report, load_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2


class UsageError(Exception):
    """Bad command line; maps to exit code 1."""


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def config_label(value: str) -> str:
    label = value.strip().upper()
    if label not in CONFIG_LABELS:
        raise argparse.ArgumentTypeError(f"unknown config label: {value}")
    return label


def config_labels(value: str) -> List[str]:
    return [config_label(v) for v in value.split(',') if v.strip()]


def risk_value(value: str) -> float:
    try:
        risk = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid risk: {value}")
    if not 0.0 <= risk <= 1.0:
        raise argparse.ArgumentTypeError(f"risk must lie in [0, 1]: {value}")
    return risk


def risk_values(value: str) -> List[float]:
    return [risk_value(v) for v in value.split(',') if v.strip()]


def algorithm_names(value: str) -> List[str]:
    names = [v.strip().lower() for v in value.split(',') if v.strip()]
    bad = [n for n in names if n not in ALGORITHMS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown algorithm: {', '.join(bad) or value}")
    return names


def format_names(value: str) -> List[str]:
    names = [v.strip().lower() for v in value.split(',') if v.strip()]
    bad = [n for n in names if n not in FORMATS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unsupported report format: {', '.join(bad) or value}")
    return names


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return number


class PoqaCLI:
    """Command-line interface for the portfolio optimization experiments."""

    def __init__(self):
        self.parser = self._create_parser()

    def _create_parser(self) -> argparse.ArgumentParser:
        parser = _ArgumentParser(
            prog='poqa',
            description='Portfolio optimization with VQE and QAOA on a statevector simulator.',
            epilog='Use "%(prog)s <command> -h" for help on specific commands.'
        )
        parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
        parser.add_argument(
            '-v', '--verbose',
            action='count',
            default=0,
            help='More logging (-v info, -vv debug)'
        )
        subparsers = parser.add_subparsers(dest='command', help='Command to execute')

        # data gen
        data_parser = subparsers.add_parser('data', help='Price data utilities')
        data_sub = data_parser.add_subparsers(dest='data_command', help='Data command')
        gen_parser = data_sub.add_parser('gen', help='Generate a synthetic price CSV')
        gen_parser.add_argument(
            '--assets', type=positive_int,
            default=config.get('data.assets', 8),
            help='Number of assets (default: 8)'
        )
        gen_parser.add_argument(
            '--days', type=positive_int,
            default=config.get('data.days', 126),
            help='Number of trading days (default: 126)'
        )
        gen_parser.add_argument(
            '--seed', type=int,
            default=config.get('data.seed', 42),
            help='Random seed (default: 42)'
        )
        gen_parser.add_argument('--drift', type=float, default=config.get('data.drift', 0.0005),
                                help='Daily drift')
        gen_parser.add_argument('--vol', type=float, default=config.get('data.vol', 0.02),
                                help='Daily volatility')
        gen_parser.add_argument('--out', required=True, help='Output CSV path')

        # solve
        solve_parser = subparsers.add_parser('solve', help='Solve one portfolio instance')
        self._add_problem_args(solve_parser)
        self._add_optimizer_args(solve_parser)
        solve_parser.add_argument(
            '--algo', choices=list(ALGORITHMS) + ['exact'], default='vqe',
            help='Solver (default: vqe)'
        )
        solve_parser.add_argument(
            '--config', type=config_label, default='B',
            help='Ansatz configuration label B..M (default: B); QAOA uses its reps'
        )
        solve_parser.add_argument('--risk', type=risk_value, default=0.5,
                                  help='Risk factor q in [0, 1] (default: 0.5)')
        solve_parser.add_argument('--seed', type=int, default=0, help='Optimizer seed')
        solve_parser.add_argument('--out', help='Write the result as JSON')

        # sweep
        sweep_parser = subparsers.add_parser('sweep', help='Run the risk x config x algorithm grid')
        self._add_problem_args(sweep_parser)
        self._add_optimizer_args(sweep_parser)
        sweep_parser.add_argument('--risks', type=risk_values,
                                  help='Comma-separated risk factors (default: 0.1..0.9)')
        sweep_parser.add_argument('--configs', type=config_labels,
                                  help='Comma-separated config labels (default: B..M)')
        sweep_parser.add_argument('--algos', type=algorithm_names,
                                  help='Comma-separated algorithms (default: vqe,qaoa)')
        sweep_parser.add_argument('--seed', type=int, help='Base seed (default: 42)')
        sweep_parser.add_argument('--workers', type=positive_int,
                                  help='Worker processes (default: cores, capped by POQA_THREADS)')
        sweep_parser.add_argument('--manifest',
                                  help='Rerun the manifest stored in a JSON report')
        sweep_parser.add_argument('--motivational', action='store_true',
                                  help='Only report risks 0.1, 0.5 and 0.9')
        sweep_parser.add_argument('--out', help='Output file, or directory for several formats')
        sweep_parser.add_argument('--format', type=format_names,
                                  help='csv,json,svg,table (default: from --out extension, else table)')

        # report
        report_parser = subparsers.add_parser('report', help='Re-emit a stored JSON report')
        report_parser.add_argument('--in', dest='input', required=True, help='JSON report path')
        report_parser.add_argument('--format', type=format_names, default=['table'],
                                   help='csv,json,svg,table (default: table)')
        report_parser.add_argument('--motivational', action='store_true',
                                   help='Only report risks 0.1, 0.5 and 0.9')
        report_parser.add_argument('--out', help='Output file, or directory for several formats')

        return parser

    def _add_problem_args(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--prices', help='Price CSV (default: the built-in sample series)')
        parser.add_argument('--assets', type=positive_int,
                            help='Use only the first N tickers')
        parser.add_argument('--budget', type=int,
                            help='Assets to select (default: assets // 2)')
        parser.add_argument('--penalty', type=float,
                            help='Budget penalty weight (default: derived from the data)')

    def _add_optimizer_args(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument('--method', choices=METHODS,
                            help='Classical optimizer (default: nelder-mead)')
        parser.add_argument('--max-evals', type=positive_int,
                            help='Evaluation cap per start (default: 2000)')
        parser.add_argument('--starts', type=positive_int,
                            help='Random starts per solve (default: 3)')
        parser.add_argument('--init', choices=('uniform', 'zeros'),
                            help='Initial parameters (default: uniform)')
        parser.add_argument('--shots', type=positive_int,
                            help='Estimate energies from N samples instead of exactly')

    def run(self, args: Optional[Sequence[str]] = None) -> int:
        """Parse ``args`` and dispatch; returns the exit code."""
        try:
            parsed_args = self.parser.parse_args(args)
        except UsageError as e:
            self.parser.print_usage(sys.stderr)
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except SystemExit as e:
            # --help and --version
            return e.code if isinstance(e.code, int) else EXIT_OK

        _configure_logging(parsed_args.verbose)

        if not parsed_args.command:
            self.parser.print_help()
            return EXIT_OK

        handler = getattr(self, f'handle_{parsed_args.command}')
        try:
            return handler(parsed_args)
        except UsageError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_USAGE
        except KeyboardInterrupt:
            print("\nOperation cancelled by user.", file=sys.stderr)
            return EXIT_RUNTIME
        except Exception as e:
            logger.debug("Command failed", exc_info=True)
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_RUNTIME

    def _series(self, args: argparse.Namespace) -> PriceSeries:
        series = load_prices(args.prices) if args.prices else sample_prices()
        if args.assets:
            if args.assets > series.n_assets:
                raise UsageError(f"--assets {args.assets} exceeds the {series.n_assets} available")
            series = series.select(series.tickers[:args.assets])
        return series

    def _budget(self, args: argparse.Namespace, n: int) -> int:
        budget = n // 2 if args.budget is None else args.budget
        if not 0 <= budget <= n:
            raise UsageError(f"infeasible budget: {budget} not in [0, {n}]")
        return budget

    def _options(self, args: argparse.Namespace, seed: int = 0) -> OptimizerOptions:
        return OptimizerOptions.from_config(
            method=args.method,
            max_evals=args.max_evals,
            starts=args.starts,
            init=args.init,
            shots=args.shots,
            seed=seed,
        )

    def handle_data(self, args: argparse.Namespace) -> int:
        """Handle ``data gen``."""
        if args.data_command != 'gen':
            raise UsageError("expected a data command: gen")
        series = generate_synthetic(
            n_assets=args.assets,
            n_days=args.days,
            seed=args.seed,
            drift=args.drift,
            vol=args.vol,
            start_date=config.get('data.start_date', '2016-07-01'),
        )
        path = save_prices(series, args.out)
        print(f"Wrote {series.n_days} days x {series.n_assets} assets to {path}")
        return EXIT_OK

    def handle_solve(self, args: argparse.Namespace) -> int:
        """Handle the solve command."""
        series = self._series(args)
        stats = estimate_statistics(compute_returns(series))
        budget = self._budget(args, series.n_assets)
        problem, qubo = build_portfolio_qubo(stats, args.risk, budget, args.penalty)
        exact = exact_ground_state(qubo)
        ansatz = AnsatzConfig.from_label(args.config)

        output = {
            'tickers': list(series.tickers),
            'risk': args.risk,
            'budget': budget,
            'penalty': problem.penalty_lambda,
            'exact': exact.to_dict(),
        }
        if args.algo == 'exact':
            bits, energy = exact.bits, exact.energy
        else:
            opts = self._options(args, seed=args.seed)
            if args.algo == 'vqe':
                result = vqe_solve(qubo, ansatz, opts)
            else:
                result = qaoa_solve(qubo_to_ising(qubo), ansatz.reps, opts)
            bits, energy = result.bits, result.energy
            output.update({
                'algorithm': args.algo,
                'config': ansatz.to_dict(),
                'options': opts.to_dict(),
                'result': result.to_dict(),
                'matched': result.bits == exact.bits,
                'energy_gap': result.energy - exact.energy,
            })
        output['selected'] = problem.selected_assets(bits, series.tickers)
        output['feasible'] = problem.is_feasible(bits)

        print(f"{args.algo.upper()} {ansatz.name if args.algo != 'exact' else ''}".rstrip())
        print(f"  bits:     {bits}  (exact {exact.bits})")
        print(f"  energy:   {energy:.10g}  (exact {exact.energy:.10g})")
        print(f"  selected: {', '.join(output['selected']) or '(none)'}")
        if not output['feasible']:
            print(f"  warning: budget of {budget} assets violated")

        if args.out:
            Path(args.out).parent.mkdir(parents=True, exist_ok=True)
            with open(args.out, 'w', encoding='utf-8') as f:
                json.dump(output, f, indent=2, ensure_ascii=False)
                f.write('\n')
            logger.info("Wrote result to %s", args.out)
        return EXIT_OK

    def _grid(self, args: argparse.Namespace) -> SweepGrid:
        if args.manifest:
            report = load_report(args.manifest)
            if report.manifest is None:
                raise ValueError(f"no manifest in {args.manifest}")
            return grid_from_manifest(report.manifest, workers=args.workers)

        series = self._series(args)
        stats = estimate_statistics(compute_returns(series))
        seed = args.seed if args.seed is not None else config.get('sweep.base_seed', 42)
        return SweepGrid(
            stats=stats,
            budget=self._budget(args, series.n_assets),
            risks=args.risks or list(config.get('sweep.risks')),
            configs=args.configs or list(config.get('sweep.configs')),
            algorithms=args.algos or list(config.get('sweep.algorithms')),
            penalty=args.penalty,
            base_seed=seed,
            options=self._options(args),
            tickers=list(series.tickers),
            workers=args.workers,
            source=str(args.prices) if args.prices else None,
        )

    def _emit(self, report, formats: Optional[List[str]], out: Optional[str]) -> None:
        if not formats:
            by_suffix = {ext: fmt for fmt, ext in EXTENSIONS.items()}
            suffix = Path(out).suffix.lower() if out else ''
            formats = [by_suffix.get(suffix, 'json' if out else 'table')]
        if out is None:
            if formats != ['table']:
                raise UsageError("--out is required for csv, json and svg output")
            sys.stdout.write(ReportWriter(report).to_table())
            return
        for path in emit_report(report, formats, out):
            print(f"Wrote {path}")

    def handle_sweep(self, args: argparse.Namespace) -> int:
        """Handle the sweep command."""
        grid = self._grid(args)
        report = run_sweep(grid)
        if args.motivational:
            report = motivational_subset(report)
        self._emit(report, args.format, args.out)

        errored = sum(1 for r in report.records if not r.ok)
        if errored:
            logger.warning("%d of %d runs failed", errored, len(report.records))
        return EXIT_OK

    def handle_report(self, args: argparse.Namespace) -> int:
        """Handle the report command."""
        report = load_report(args.input)
        if args.motivational:
            report = motivational_subset(report)
        self._emit(report, args.format, args.out)
        return EXIT_OK


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point for the CLI."""
    cli = PoqaCLI()
    return cli.run(argv)


if __name__ == '__main__':
    sys.exit(main())
