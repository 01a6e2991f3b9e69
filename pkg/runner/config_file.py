"""
Run configuration files: INI sections named after the engine modules.

    [network-model]      NetworkParams fields
    [analytic-coverage]  variant, assume_perfect_backhaul, quadrature tolerances
    [montecarlo-sim]     drops, seed, region_radius, workers, sinr_gating,
                         record_path, scheme, tau, pilot_contamination
    [cli]                method, format, out, workers, no_timestamp
    [sweep]              name = start, stop, steps, linear|log  (at most two)

Absent keys keep the defaults from config.py, so an empty file is the
baseline deployment.
"""

import configparser
import dataclasses
import itertools
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

import config
from analytic.coverage import VARIANTS
from network.params import MitigationConfig, NetworkParams, Scheme, with_overrides
from numerics.quadrature import QuadratureSettings
from utils.errors import ConfigError, CoverageError
from utils.helpers import axis_values

logger = logging.getLogger(__name__)

METHODS = ('analytic', 'montecarlo', 'both')
METHOD_ALIASES = {'mc': 'montecarlo', 'monte-carlo': 'montecarlo'}
FORMATS = ('csv', 'json')
MAX_SWEEP_AXES = 2

_NETWORK_FIELDS = {f.name: f.type for f in dataclasses.fields(NetworkParams)}
_QUADRATURE_FIELDS = {f.name: f.type for f in dataclasses.fields(QuadratureSettings)}

SECTION_KEYS = {
    'network-model': set(_NETWORK_FIELDS),
    'analytic-coverage': {'variant', 'assume_perfect_backhaul'} | set(_QUADRATURE_FIELDS),
    'montecarlo-sim': {'drops', 'seed', 'region_radius', 'workers', 'sinr_gating', 'record_path',
                       'scheme', 'tau', 'pilot_contamination'},
    'cli': {'method', 'format', 'out', 'workers', 'no_timestamp'},
    'sweep': set(config.RUN_SETTINGS['sweep_parameters']),
}


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter"""
    name: str
    start: float
    stop: float
    steps: int
    scale: str = 'linear'

    def values(self) -> np.ndarray:
        return axis_values(self.start, self.stop, self.steps, self.scale)


@dataclass
class RunConfig:
    """Everything one CLI invocation needs"""
    params: NetworkParams = field(default_factory=NetworkParams.from_defaults)
    mitigation: MitigationConfig = field(default_factory=MitigationConfig)
    method: str = config.RUN_SETTINGS['method']
    variant: str = 'exact'
    assume_perfect_backhaul: bool = False
    quadrature: QuadratureSettings = field(default_factory=QuadratureSettings.from_config)
    drops: int = config.SIMULATION_SETTINGS['drops']
    seed: int = config.SIMULATION_SETTINGS['seed']
    region_radius: Optional[float] = None
    mc_workers: int = config.SIMULATION_SETTINGS['workers']
    sinr_gating: bool = config.SIMULATION_SETTINGS['sinr_gating']
    record_path: Optional[str] = None
    axes: List[SweepAxis] = field(default_factory=list)
    out: Optional[str] = None
    format: str = config.RUN_SETTINGS['format']
    workers: int = config.RUN_SETTINGS['workers']
    no_timestamp: bool = False
    source: Optional[str] = None

    @property
    def methods(self) -> Tuple[str, ...]:
        return ('analytic', 'montecarlo') if self.method == 'both' else (self.method,)

    def points(self) -> List[Dict[str, float]]:
        """Sweep points, Cartesian product in row-major order; one empty point without axes"""
        if not self.axes:
            return [{}]
        grids = [[(axis.name, float(v)) for v in axis.values()] for axis in self.axes]
        return [dict(combo) for combo in itertools.product(*grids)]

    def at_point(self, point: Dict[str, float]) -> Tuple[NetworkParams, MitigationConfig]:
        """Parameters and mitigation with one sweep point applied"""
        changes = {k: v for k, v in point.items() if k != 'tau'}
        params = with_overrides(self.params, **changes) if changes else self.params
        mitigation = self.mitigation
        if 'tau' in point:
            mitigation = dataclasses.replace(mitigation, tau=point['tau'])
        return params, mitigation

    def validate(self) -> 'RunConfig':
        """Cross-field checks; raises ConfigError"""
        if self.method not in METHODS:
            raise ConfigError(f"unknown method '{self.method}' (expected {', '.join(METHODS)})", field='method')
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format '{self.format}' (expected csv or json)", field='format')
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown analytic variant '{self.variant}'", field='variant')
        if 'montecarlo' in self.methods and self.drops < 100:
            raise ConfigError(f"Monte Carlo needs at least 100 drops, got {self.drops}", field='drops')
        if self.workers < 1 or self.mc_workers < 1:
            raise ConfigError("worker counts must be >= 1", field='workers')
        if len(self.axes) > MAX_SWEEP_AXES:
            raise ConfigError(f"at most {MAX_SWEEP_AXES} sweep axes, got {len(self.axes)}", field='sweep')
        names = [axis.name for axis in self.axes]
        if 'tau' in names and self.mitigation.scheme is not Scheme.DISTRIBUTED:
            raise ConfigError("sweeping tau needs scheme = distributed-mode-selection", field='tau')
        if 'q' in names and self.mitigation.scheme is Scheme.DISTRIBUTED:
            raise ConfigError("q is set by tau under distributed mode selection", field='q')
        for point in (self.points()[0], self.points()[-1]) if self.axes else ():
            try:
                self.at_point(point)
            except CoverageError as e:
                raise ConfigError(f"sweep endpoint {point} is invalid: {e.message}",
                                  field=e.details.get('field'))
        return self


def _line_index(text: str) -> Dict[Tuple[str, str], int]:
    """(section, key) -> 1-based line of its definition"""
    index = {}
    section = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r'^\[([^\]]+)\]', stripped)
        if header:
            section = header.group(1).strip()
            index[(section, '')] = number
            continue
        item = re.match(r'^([^=:#;\s][^=:]*?)\s*[=:]', stripped)
        if item and section is not None:
            index[(section, item.group(1).strip())] = number
    return index


class _Reader:
    """Typed access to one parsed section with field/line-addressed errors"""

    def __init__(self, parser: configparser.ConfigParser, section: str, lines: Dict[Tuple[str, str], int]):
        self.parser = parser
        self.section = section
        self.lines = lines

    def has(self, key: str) -> bool:
        return self.parser.has_section(self.section) and self.parser.has_option(self.section, key)

    def line(self, key: str) -> Optional[int]:
        return self.lines.get((self.section, key))

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(f"[{self.section}] {key}: {message}", field=key, line=self.line(key))

    def raw(self, key: str) -> str:
        value = self.parser.get(self.section, key).strip()
        if not value:
            raise self.error(key, "value is empty")
        return value

    def get(self, key: str, kind: type):
        if kind is bool:
            value = self.raw(key)
            try:
                return self.parser.getboolean(self.section, key)
            except ValueError:
                raise self.error(key, f"expected a boolean, got '{value}'")
        value = self.raw(key)
        try:
            if kind is int:
                number = float(value)
                if not number.is_integer():
                    raise ValueError(value)
                return int(number)
            if kind is float:
                return float(value)
        except ValueError:
            raise self.error(key, f"expected {kind.__name__}, got '{value}'")
        return value


def _parse_axis(reader: _Reader, key: str) -> SweepAxis:
    parts = [part.strip() for part in reader.raw(key).split(',')]
    if len(parts) not in (3, 4):
        raise reader.error(key, "expected 'start, stop, steps[, linear|log]'")
    try:
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise reader.error(key, f"non-numeric bounds in '{reader.raw(key)}'")
    scale = parts[3].lower() if len(parts) == 4 else 'linear'
    if scale not in ('linear', 'log'):
        raise reader.error(key, f"scale must be linear or log, got '{scale}'")
    if not start < stop:
        raise reader.error(key, f"start {start} must be below stop {stop}")
    if steps < 2:
        raise reader.error(key, f"steps must be >= 2, got {steps}")
    if scale == 'log' and start <= 0.0:
        raise reader.error(key, "log axis needs a positive start")
    return SweepAxis(name=key, start=start, stop=stop, steps=steps, scale=scale)


def parse_run_config(text: str, source: Optional[str] = None) -> RunConfig:
    """
    Parse INI text into a validated RunConfig

    Raises:
        ConfigError: syntax errors, unknown sections or keys, empty or mistyped
                     values, invalid parameters (field and line filled in)
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source or '<config>')
    except configparser.Error as e:
        raise ConfigError(f"could not parse configuration: {e}", line=getattr(e, 'lineno', None))
    lines = _line_index(text)

    for section in parser.sections():
        if section not in SECTION_KEYS:
            raise ConfigError(f"unknown section [{section}]", field=section, line=lines.get((section, '')))
        for key in parser.options(section):
            if key not in SECTION_KEYS[section]:
                raise ConfigError(f"[{section}] unknown key '{key}'", field=key,
                                  line=lines.get((section, key)))

    run = RunConfig(source=source)

    network = _Reader(parser, 'network-model', lines)
    overrides = {name: network.get(name, kind) for name, kind in _NETWORK_FIELDS.items() if network.has(name)}
    try:
        run.params = NetworkParams.from_defaults(**overrides)
    except CoverageError as e:
        key = e.details.get('field')
        raise ConfigError(f"[network-model] {e.message}", field=key, line=network.line(key) if key else None)

    analytic = _Reader(parser, 'analytic-coverage', lines)
    if analytic.has('variant'):
        run.variant = analytic.raw('variant').lower()
    if analytic.has('assume_perfect_backhaul'):
        run.assume_perfect_backhaul = analytic.get('assume_perfect_backhaul', bool)
    tolerances = {name: analytic.get(name, kind) for name, kind in _QUADRATURE_FIELDS.items() if analytic.has(name)}
    if tolerances:
        run.quadrature = QuadratureSettings.from_config(**tolerances)

    mc = _Reader(parser, 'montecarlo-sim', lines)
    for key, attr, kind in (('drops', 'drops', int), ('seed', 'seed', int), ('region_radius', 'region_radius', float),
                            ('workers', 'mc_workers', int), ('sinr_gating', 'sinr_gating', bool),
                            ('record_path', 'record_path', str)):
        if mc.has(key):
            setattr(run, attr, mc.get(key, kind))
    scheme = mc.raw('scheme') if mc.has('scheme') else Scheme.NONE
    tau = mc.get('tau', float) if mc.has('tau') else None
    pilot = mc.get('pilot_contamination', bool) if mc.has('pilot_contamination') else False
    try:
        run.mitigation = MitigationConfig(scheme=scheme, tau=tau, pilot_contamination=pilot)
    except CoverageError as e:
        key = e.details.get('field') or 'scheme'
        raise ConfigError(f"[montecarlo-sim] {e.message}", field=key, line=mc.line(key))

    cli = _Reader(parser, 'cli', lines)
    if cli.has('method'):
        method = cli.raw('method').lower()
        run.method = METHOD_ALIASES.get(method, method)
    for key, kind in (('format', str), ('out', str), ('workers', int), ('no_timestamp', bool)):
        if cli.has(key):
            value = cli.get(key, kind)
            setattr(run, key, value.lower() if key == 'format' else value)

    sweep = _Reader(parser, 'sweep', lines)
    if parser.has_section('sweep'):
        run.axes = [_parse_axis(sweep, key) for key in parser.options('sweep')]

    run.validate()
    logger.debug(f"📝 Run config parsed from {source or 'text'}: method={run.method}, "
                 f"{len(run.axes)} axis/axes, scheme={run.mitigation.scheme.value}")
    return run


def load_run_config(path: Optional[str] = None) -> RunConfig:
    """Read a config file; no path gives the defaults"""
    if path is None:
        return RunConfig().validate()
    file = Path(path)
    if not file.is_file():
        raise ConfigError(f"configuration file not found: {path}", field='config')
    return parse_run_config(file.read_text(encoding='utf-8'), source=str(file))


__all__ = [
    'METHODS',
    'FORMATS',
    'SECTION_KEYS',
    'SweepAxis',
    'RunConfig',
    'parse_run_config',
    'load_run_config',
]
