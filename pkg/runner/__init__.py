"""
CLI plumbing: run configuration files, sweep dispatch and result files.
"""

from .config_file import (
    METHODS, FORMATS, SECTION_KEYS, SweepAxis, RunConfig, parse_run_config, load_run_config
)
from .controller import SOLVE_VARIANTS, TARGETS, SweepController, evaluate_point, solve
from .output import RESULT_COLUMNS, columns_for, render_csv, render_json, write_rows

__all__ = [
    # configuration
    'METHODS',
    'FORMATS',
    'SECTION_KEYS',
    'SweepAxis',
    'RunConfig',
    'parse_run_config',
    'load_run_config',

    # controller
    'SOLVE_VARIANTS',
    'TARGETS',
    'SweepController',
    'evaluate_point',
    'solve',

    # output
    'RESULT_COLUMNS',
    'columns_for',
    'render_csv',
    'render_json',
    'write_rows',
]
