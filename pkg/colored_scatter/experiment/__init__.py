"""Experiment runner and validation suites."""

from .runner import (
    CSV_COLUMNS,
    RunSummary,
    csv_row,
    ensure_writable,
    run,
    sibling_path,
    write_csv,
    write_manifest,
)
from .validation import CheckResult, ValidationReport, validate

__all__ = [
    "CSV_COLUMNS",
    "CheckResult",
    "RunSummary",
    "ValidationReport",
    "csv_row",
    "ensure_writable",
    "run",
    "sibling_path",
    "validate",
    "write_csv",
    "write_manifest",
]
