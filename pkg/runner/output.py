"""
CSV / JSON result files, one row per (sweep point, method).
"""

import csv
import json
import logging
import sys
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from analytic.report import PROBABILITY_FIELDS
from utils.helpers import format_number, to_jsonable, utc_timestamp

logger = logging.getLogger(__name__)

RESULT_COLUMNS = ('method', 'status', 'q', *PROBABILITY_FIELDS, 'error', 'wall_time', 'message')


def columns_for(axes: Sequence[str]) -> List[str]:
    """Swept axes first, then the fixed result columns (a swept q keeps its axis slot)"""
    return [*axes, *(column for column in RESULT_COLUMNS if column not in axes)]


def _cell(row: Dict[str, Any], key: str, timestamp: bool) -> Any:
    # wall time is the only run-dependent cell
    if key == 'wall_time' and not timestamp:
        return None
    return row.get(key)


def render_csv(rows: List[Dict[str, Any]], axes: Sequence[str], timestamp: bool = True) -> str:
    buffer = StringIO()
    if timestamp:
        buffer.write(f"# generated {utc_timestamp()}\n")
    writer = csv.DictWriter(buffer, fieldnames=columns_for(axes), extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({key: format_number(_cell(row, key, timestamp)) for key in writer.fieldnames})
    return buffer.getvalue()


def render_json(rows: List[Dict[str, Any]], axes: Sequence[str], timestamp: bool = True) -> str:
    columns = columns_for(axes)
    document = {}
    if timestamp:
        document['generated'] = utc_timestamp()
    document['rows'] = [{key: to_jsonable(_cell(row, key, timestamp)) for key in columns} for row in rows]
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def write_rows(rows: List[Dict[str, Any]], axes: Sequence[str], path: Optional[str] = None,
               fmt: str = 'csv', timestamp: bool = True) -> str:
    """
    Write result rows in sweep order

    Args:
        rows: Row dicts keyed by column name
        axes: Swept parameter names
        path: Output file, stdout when None
        fmt: 'csv' or 'json'
        timestamp: Include the generation time (header comment / 'generated' key)

    Returns:
        The rendered text
    """
    text = render_json(rows, axes, timestamp) if fmt == 'json' else render_csv(rows, axes, timestamp)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return text
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding='utf-8')
    logger.info(f"✅ {len(rows)} rows written to {target} ({fmt})")
    return text


__all__ = [
    'RESULT_COLUMNS',
    'columns_for',
    'render_csv',
    'render_json',
    'write_rows',
]
