import json
import math
from datetime import datetime, timezone
from typing import Any, Optional

import numpy as np

from utils.errors import DomainError, require


def axis_values(start: float, stop: float, steps: int, scale: str = 'linear') -> np.ndarray:
    """
    Grid of a sweep axis

    Args:
        start: First value
        stop: Last value (included)
        steps: Number of points, at least 2
        scale: 'linear' or 'log'

    Returns:
        Array of `steps` values
    """
    require(steps >= 2, f"a sweep axis needs at least 2 steps, got {steps}")
    require(start < stop, f"sweep start {start} must be below stop {stop}")
    if scale == 'linear':
        return np.linspace(start, stop, steps)
    if scale == 'log':
        require(start > 0.0, f"log axis needs a positive start, got {start}")
        return np.geomspace(start, stop, steps)
    raise DomainError(f"unknown axis scale '{scale}' (expected linear or log)")


def utc_timestamp() -> str:
    """ISO-8601 UTC time, second precision"""
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def format_number(value: Any) -> str:
    """Fixed textual form for CSV cells; None becomes empty"""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return f"{float(value):.10g}"
    return str(value)


def to_jsonable(value: Any) -> Any:
    """numpy scalars, arrays and enums to plain JSON types"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if hasattr(value, 'value') and isinstance(getattr(value, 'value'), str):
        return value.value
    return value


def dump_json(value: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(to_jsonable(value), indent=indent, ensure_ascii=False)


def format_duration(seconds: float) -> str:
    """Wall time as '850ms', '12.4s' or '3m 05s'"""
    if seconds < 1.0:
        return f"{seconds * 1000:.0f}ms"
    if seconds < 60.0:
        return f"{seconds:.1f}s"
    minutes, rest = divmod(int(round(seconds)), 60)
    return f"{minutes}m {rest:02d}s"
