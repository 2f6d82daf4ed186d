"""Result files and terminal tables for experiment runs.

Tables are written as CSV with a header row and reals in their shortest
round-trip form; every CSV is mirrored by a YAML summary carrying the same
rows plus run metadata. Text output renders the same table with rich.
"""
import csv
import io
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from rich.console import Console
from rich.table import Table

from .config.strings import (FORMAT_CSV, STR_CSV_SUFFIX, STR_ENCODING,
                             STR_SUMMARY_SUFFIX, STR_TEXT_SUFFIX)
from .experiments import ExperimentResult, OutputSpec

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """Render a cell: reals via repr (shortest round-trip), None as empty."""
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    return value


def write_csv(path: Path, columns: Iterable[str], rows: Iterable[dict]) -> Path:
    """Write rows to a CSV file with a header row."""
    columns = list(columns)
    with open(path, 'w', encoding=STR_ENCODING, newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow({name: format_value(row.get(name)) for name in columns})
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    """Read a CSV file written by write_csv back into string rows."""
    with open(path, encoding=STR_ENCODING, newline='') as handle:
        return list(csv.DictReader(handle))


def write_summary(path: Path, result: ExperimentResult) -> Path:
    """Write the YAML summary mirroring a result's table."""
    document = {
        'command': result.command,
        'summary': {key: _plain(value) for key, value in result.summary.items()},
        'columns': list(result.columns),
        'rows': [{name: _plain(row.get(name)) for name in result.columns} for row in result.rows],
    }
    with open(path, 'w', encoding=STR_ENCODING) as handle:
        yaml.safe_dump(document, handle, sort_keys=False)
    return path


def build_table(result: ExperimentResult) -> Table:
    """Return the result as an aligned rich table."""
    table = Table(title=result.command)
    for name in result.columns:
        table.add_column(name, justify='left' if name == 'kind' else 'right')
    for row in result.rows:
        table.add_row(*(format_value(row.get(name)) for name in result.columns))
    return table


def render_text(result: ExperimentResult, width: int = 1000) -> str:
    """Return the table as plain aligned text."""
    buffer = io.StringIO()
    Console(file=buffer, width=width, color_system=None).print(build_table(result))
    return buffer.getvalue()


def write_outputs(result: ExperimentResult, output: OutputSpec) -> list[Path]:
    """Write the result files named by output; returns the paths written."""
    if output.path is None:
        return []
    output.path.parent.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if output.format == FORMAT_CSV:
        written.append(write_csv(output.path.with_suffix(STR_CSV_SUFFIX), result.columns, result.rows))
    else:
        text_path = output.path.with_suffix(STR_TEXT_SUFFIX)
        text_path.write_text(render_text(result), encoding=STR_ENCODING)
        written.append(text_path)
    if output.summary:
        written.append(write_summary(output.path.with_suffix(STR_SUMMARY_SUFFIX), result))
    for path in written:
        logger.debug('Wrote %s', path)
    return written
