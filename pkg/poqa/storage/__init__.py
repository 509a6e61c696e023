"""Report persistence."""

from .reports import FORMATS, ReportWriter, emit_report, load_report

__all__ = ['FORMATS', 'ReportWriter', 'emit_report', 'load_report']
