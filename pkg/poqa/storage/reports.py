"""Sweep report emission (CSV, JSON, SVG, text table) and loading."""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from ..config import config
from ..core.sweep import (
    MatchRate,
    config_match_rates,
    energy_spread,
    match_rate_rows,
    reps_match_rates,
)
from ..models.results import SweepReport
from .svg import SVG

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json', 'svg', 'table')
EXTENSIONS = {'csv': '.csv', 'json': '.json', 'svg': '.svg', 'table': '.txt'}
CSV_COLUMNS = [
    'risk', 'algorithm', 'config', 'energy', 'bits',
    'feasible', 'matched', 'energy_gap', 'evals', 'seed',
]

COLORS = {'classical': '#4c72b0', 'vqe': '#dd8452', 'qaoa': '#55a868'}
CHART_WIDTH = 760
CHART_HEIGHT = 260
MARGIN = 50
MATCH_MARK = '✓'
MISS_MARK = '✗'
ERROR_MARK = '-'
NO_DATA = 'n/a'


class ReportWriter:
    """Renders one :class:`SweepReport` in each supported format."""

    def __init__(self, report: SweepReport, float_format: Optional[str] = None):
        if not report.records:
            raise ValueError("empty report")
        self.report = report
        self.float_format = float_format or config.get('report.float_format', '.16e')

    def _rows(self) -> List[Dict]:
        return [
            {
                'risk': r.risk,
                'algorithm': r.algorithm,
                'config': r.label,
                'energy': r.energy,
                'bits': r.bits,
                'feasible': r.feasible,
                'matched': r.matched,
                'energy_gap': r.energy_gap,
                'evals': r.evals,
                'seed': r.seed,
            }
            for r in self.report.records
        ]

    def to_csv(self) -> str:
        """One line per record; floats in scientific notation with 17 significant digits."""
        frame = pd.DataFrame(self._rows(), columns=CSV_COLUMNS)
        for column in ('risk', 'energy', 'energy_gap'):
            frame[column] = frame[column].astype(float)
        return frame.to_csv(
            index=False,
            float_format=f'%{self.float_format}',
            na_rep='',
            lineterminator='\n',
        )

    def to_json(self) -> str:
        data = self.report.to_dict()
        # denominators leave errored runs out; the counts say how many
        data['match_rates'] = [dict(row._asdict()) for row in match_rate_rows(self.report)]
        data['summaries'] = {
            'config_match_rates': [
                {'config': label, 'algorithm': algo, 'rate': rate}
                for (label, algo), rate in config_match_rates(self.report).items()
            ],
            'reps_match_rates': [
                {'reps': reps, 'algorithm': algo, 'rate': rate}
                for (reps, algo), rate in reps_match_rates(self.report).items()
            ],
            'energy_spread': [
                {'risk': risk, 'algorithm': algo, **values}
                for (risk, algo), values in energy_spread(self.report).items()
            ],
        }
        return json.dumps(data, indent=2, ensure_ascii=False) + '\n'

    def to_table(self) -> str:
        """✓/✗ grid of configs against risks, one block per algorithm."""
        report = self.report
        risks = report.risks
        labels = sorted({r.label for r in report.records})
        algorithms = sorted({r.algorithm for r in report.records}, key=_algorithm_order)
        cells = {(r.algorithm, r.label, r.risk): r for r in report.records}
        counts = {(row.risk, row.algorithm): row for row in match_rate_rows(report)}
        width = max(5, *(len(f"{risk:g}") for risk in risks))

        lines = []
        for algorithm in algorithms:
            lines.append(f"{algorithm.upper():<8}" + ''.join(f"{risk:>{width}g}" for risk in risks))
            for label in labels:
                marks = []
                for risk in risks:
                    record = cells.get((algorithm, label, risk))
                    if record is None or not record.ok:
                        marks.append(ERROR_MARK)
                    else:
                        marks.append(MATCH_MARK if record.matched else MISS_MARK)
                lines.append(f"{label:<8}" + ''.join(f"{m:>{width}}" for m in marks))
            rows = [counts.get((risk, algorithm)) for risk in risks]
            lines.append(f"{'match %':<8}" + ''.join(f"{_rate_text(row):>{width}}" for row in rows))
            errored = [row.errored if row else 0 for row in rows]
            if any(errored):
                lines.append(f"{'errored':<8}" + ''.join(f"{n:>{width}}" for n in errored))
            lines.append('')

        lines.append(f"{'exact':<8}" + '  '.join(
            f"{risk:g}={report.exact[risk].bits}" for risk in risks
        ))
        return '\n'.join(lines) + '\n'

    def to_svg(self) -> str:
        """One grouped bar chart per risk, then the match-rate chart."""
        report = self.report
        risks = report.risks
        height = (len(risks) + 1) * (CHART_HEIGHT + MARGIN) + MARGIN
        svg = SVG()
        svg.header(CHART_WIDTH + 2 * MARGIN, height)
        svg.style("text { font-family: sans-serif; font-size: 11px; } "
                  ".title { font-size: 14px; font-weight: bold; }")

        top = MARGIN
        for risk in risks:
            self._energy_chart(svg, risk, top)
            top += CHART_HEIGHT + MARGIN
        self._match_chart(svg, top)
        return svg.get_svg()

    def _energy_chart(self, svg: SVG, risk: float, top: float) -> None:
        exact = self.report.exact[risk]
        records = [r for r in self.report.records if r.risk == risk]
        labels = sorted({r.label for r in records})
        algorithms = sorted({r.algorithm for r in records}, key=_algorithm_order)
        cells = {(r.algorithm, r.label): r for r in records}

        energies = [exact.energy] + [r.energy for r in records if r.ok]
        low, high = min(0.0, *energies), max(0.0, *energies)
        span = (high - low) or 1.0

        def y(value: float) -> float:
            return top + CHART_HEIGHT * (high - value) / span

        slots = 1 + len(labels) * len(algorithms)
        gaps = len(labels) + 1
        bar = CHART_WIDTH / (slots + gaps)

        svg.group_start({'class': 'chart risk-chart', 'id': f'risk-{risk:g}',
                         'title': f'Ground state energy, risk {risk:g}'})
        svg.text(MARGIN, top - 10, f"Ground state energy at risk {risk:g}", 'class="title"')
        svg.line(MARGIN, y(0.0), MARGIN + CHART_WIDTH, y(0.0))

        x = MARGIN
        _bar(svg, x, bar, y(0.0), y(exact.energy), 'classical',
             f"exact {exact.bits}: {exact.energy:.6g}")
        x += 2 * bar
        for label in labels:
            for algorithm in algorithms:
                record = cells.get((algorithm, label))
                if record is not None and record.ok:
                    _bar(svg, x, bar, y(0.0), y(record.energy), algorithm,
                         f"{algorithm} {label} {record.bits}: {record.energy:.6g}")
                else:
                    _bar(svg, x, bar, y(0.0), y(0.0), algorithm, f"{algorithm} {label}: error")
                x += bar
            svg.text(x - bar * len(algorithms), top + CHART_HEIGHT + 14, label)
            x += bar
        svg.group_end()

    def _match_chart(self, svg: SVG, top: float) -> None:
        rows = {(row.risk, row.algorithm): row for row in match_rate_rows(self.report)}
        risks = self.report.risks
        algorithms = sorted({algorithm for _, algorithm in rows}, key=_algorithm_order)
        bar = CHART_WIDTH / (len(risks) * (len(algorithms) + 1) + 1)

        def y(rate: float) -> float:
            return top + CHART_HEIGHT * (100.0 - rate) / 100.0

        svg.group_start({'class': 'chart match-chart', 'id': 'match-rates',
                         'title': 'Match rate against the exact solver'})
        svg.text(MARGIN, top - 10, "Match rate against the exact solver (%)", 'class="title"')
        svg.line(MARGIN, y(0.0), MARGIN + CHART_WIDTH, y(0.0))

        x = MARGIN + bar
        for risk in risks:
            for algorithm in algorithms:
                row = rows.get((risk, algorithm))
                rate = row.rate if row is not None and row.rate is not None else 0.0
                _bar(svg, x, bar, y(0.0), y(rate), algorithm, _match_title(algorithm, risk, row))
                x += bar
            svg.text(x - bar * len(algorithms), top + CHART_HEIGHT + 14, f"{risk:g}")
            x += bar
        svg.group_end()

    def render(self, fmt: str) -> str:
        renderers = {
            'csv': self.to_csv,
            'json': self.to_json,
            'svg': self.to_svg,
            'table': self.to_table,
        }
        if fmt not in renderers:
            raise ValueError(f"unsupported report format: {fmt}")
        return renderers[fmt]()


def _algorithm_order(algorithm: str) -> int:
    return ('vqe', 'qaoa').index(algorithm) if algorithm in ('vqe', 'qaoa') else 2


def _rate_text(row: Optional[MatchRate]) -> str:
    if row is None or row.rate is None:
        return NO_DATA
    return f"{row.rate:.1f}"


def _match_title(algorithm: str, risk: float, row: Optional[MatchRate]) -> str:
    title = f"{algorithm} risk {risk:g}: "
    if row is None or row.rate is None:
        return title + "no data"
    title += f"{row.rate:.1f}%"
    if row.errored:
        title += f" ({row.errored} errored)"
    return title


def _bar(svg: SVG, x: float, width: float, base: float, level: float, series: str, title: str) -> None:
    y1, y2 = min(base, level), max(base, level)
    svg.filled_rectangle(x, y1, x + width, y2, COLORS.get(series, '#999'),
                         css_class=f'bar {series}', title=title)


def _targets(formats: Sequence[str], out: Union[str, Path]) -> Dict[str, Path]:
    out = Path(out)
    if len(formats) == 1 and not out.is_dir():
        return {formats[0]: out}
    return {fmt: out / f"report{EXTENSIONS[fmt]}" for fmt in formats}


def emit_report(
    report: SweepReport,
    formats: Union[str, Sequence[str]],
    out: Union[str, Path],
) -> List[Path]:
    """
    Write ``report`` in each of ``formats``.

    A single format goes to ``out`` itself unless it is an existing directory;
    several formats go to ``out/report.<ext>``. Raises OSError when a path
    cannot be written.
    """
    if isinstance(formats, str):
        formats = [f.strip() for f in formats.split(',') if f.strip()]
    unknown = [f for f in formats if f not in FORMATS]
    if unknown or not formats:
        raise ValueError(f"unsupported report format: {', '.join(unknown) or '(none)'}")

    writer = ReportWriter(report)
    targets = _targets(formats, out)
    written = []
    for fmt, path in targets.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(writer.render(fmt))
        logger.info("Wrote %s report to %s", fmt, path)
        written.append(path)
    return written


def load_report(path: Union[str, Path]) -> SweepReport:
    """Read a JSON report written by :func:`emit_report`."""
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    try:
        return SweepReport.from_dict(data)
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed report {path}: {e}") from e
