"""
Shared utilities: logging setup, the error hierarchy and small formatting helpers.
"""

from .logger import setup_logging, ColorFormatter
from .errors import (
    CoverageError, DomainError, ConvergenceError, RegimeError,
    AssumptionError, DegenerateTopologyError, ConfigError, require
)
from .helpers import (
    axis_values, utc_timestamp, format_number,
    to_jsonable, dump_json, format_duration
)

__all__ = [
    # logging
    'setup_logging',
    'ColorFormatter',

    # errors
    'CoverageError',
    'DomainError',
    'ConvergenceError',
    'RegimeError',
    'AssumptionError',
    'DegenerateTopologyError',
    'ConfigError',
    'require',

    # helpers
    'axis_values',
    'utc_timestamp',
    'format_number',
    'to_jsonable',
    'dump_json',
    'format_duration',
]
