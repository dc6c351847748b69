"""Catalog ingestion, suite runner, reports and the command-line interface."""

from .catalog import Catalog, CatalogParseError, Entry, load_catalog, parse_catalog
from .report import RunReport, emit_report
from .runner import ResultCache, run_entries, run_entry, run_suite

__all__ = [
    "Catalog",
    "CatalogParseError",
    "Entry",
    "ResultCache",
    "RunReport",
    "emit_report",
    "load_catalog",
    "parse_catalog",
    "run_entries",
    "run_entry",
    "run_suite",
]
