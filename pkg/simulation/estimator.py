"""
Monte Carlo coverage estimation over independent seeded drops.
"""

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

import config
from analytic.closed_form import distributed_mode_fraction
from analytic.report import PROBABILITY_FIELDS, CoverageReport
from network.model import derive_model
from network.params import MitigationConfig, Mode, NetworkParams, Scheme, with_overrides
from simulation.drop import DropResult, evaluate_drop
from simulation.topology import associate, default_region_radius, sample_topology
from utils.errors import DegenerateTopologyError, require

logger = logging.getLogger(__name__)

Z_95 = 1.959963984540054

COUNT_KEYS = (
    'drops', 'resampled',
    'access_I', 'backhaul_I', 'access_O', 'backhaul_O',
    'selected_I', 'access_I_selected', 'backhaul_I_selected',
    'selected_O', 'access_O_selected', 'backhaul_O_selected',
)


def drop_seed(seed: int, index: int, attempt: int = 0) -> np.random.SeedSequence:
    """Seed of attempt `attempt` of drop `index`, independent of worker layout"""
    return np.random.SeedSequence(seed, spawn_key=(index, attempt))


def run_drop(p: NetworkParams, m: MitigationConfig, seed: int, index: int,
             region_radius: Optional[float] = None, sinr_gating: bool = False,
             max_resamples: Optional[int] = None) -> Tuple[DropResult, int]:
    """
    One drop, redrawn while the topology is empty

    Returns:
        (DropResult, number of redraws)

    Raises:
        DegenerateTopologyError: every attempt was empty
    """
    if max_resamples is None:
        max_resamples = config.SIMULATION_SETTINGS['max_resamples']
    for attempt in range(max_resamples + 1):
        try:
            t = sample_topology(p, region_radius, drop_seed(seed, index, attempt))
        except DegenerateTopologyError:
            continue
        result = evaluate_drop(associate(t, p), p, m, sinr_gating=sinr_gating)
        result.index = index
        return result, attempt
    raise DegenerateTopologyError(f"drop {index} stayed empty after {max_resamples} redraws",
                                  index=index, max_resamples=max_resamples)


def _tally(counts: Dict[str, int], result: DropResult, redraws: int) -> None:
    counts['drops'] += 1
    counts['resampled'] += redraws
    counts['access_I'] += result.access_I
    counts['backhaul_I'] += result.backhaul_I
    counts['access_O'] += result.access_O
    counts['backhaul_O'] += result.backhaul_O
    suffix = 'I' if result.tagged_mode is Mode.IBFD else 'O'
    counts[f'selected_{suffix}'] += 1
    counts[f'access_{suffix}_selected'] += getattr(result, f'access_{suffix}')
    counts[f'backhaul_{suffix}_selected'] += getattr(result, f'backhaul_{suffix}')


def _run_chunk(task: dict) -> Tuple[Dict[str, int], List[dict]]:
    """Worker entry point: tally drops [start, stop)"""
    counts = dict.fromkeys(COUNT_KEYS, 0)
    records = []
    for index in range(task['start'], task['stop']):
        result, redraws = run_drop(task['params'], task['mitigation'], task['seed'], index,
                                   task['region_radius'], task['sinr_gating'])
        _tally(counts, result, redraws)
        if task['record']:
            records.append(result.to_record())
    return counts, records


def _chunks(drops: int, workers: int) -> List[Tuple[int, int]]:
    edges = np.linspace(0, drops, min(drops, 4 * workers) + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _marginal_half_width(value: float, n: int) -> float:
    return Z_95 * math.sqrt(max(value * (1.0 - value), 0.0) / n)


def _product_half_width(a: float, b: float, n_a: int, n_b: int) -> float:
    """Delta-method half-width of a b for independent marginal estimates"""
    var = b * b * a * (1.0 - a) / n_a + a * a * b * (1.0 - b) / n_b
    return Z_95 * math.sqrt(max(var, 0.0))


def _compose(counts: Dict[str, int], p: NetworkParams, m: MitigationConfig) -> CoverageReport:
    n = counts['drops']
    flags = []
    q = p.q
    n_I = n_O = n
    access_I = counts['access_I'] / n
    backhaul_I = counts['backhaul_I'] / n
    access_O = counts['access_O'] / n
    backhaul_O = counts['backhaul_O'] / n

    if m.scheme is Scheme.DISTRIBUTED:
        q = counts['selected_I'] / n
        flags.append(f"realised_ibfd_fraction={q:.6f}")
        if counts['selected_I'] > 0:
            n_I = counts['selected_I']
            access_I = counts['access_I_selected'] / n_I
            backhaul_I = counts['backhaul_I_selected'] / n_I
        if counts['selected_O'] > 0:
            n_O = counts['selected_O']
            access_O = counts['access_O_selected'] / n_O
            backhaul_O = counts['backhaul_O_selected'] / n_O
    if m.scheme is not Scheme.NONE:
        flags.append(m.scheme.value)
    if m.pilot_contamination:
        flags.append("pilot_contamination")

    h_I = _product_half_width(access_I, backhaul_I, n_I, n_I)
    h_O = _product_half_width(access_O, backhaul_O, n_O, n_O)
    half_widths = {
        'c_access_I': _marginal_half_width(access_I, n_I),
        'c_access_O': _marginal_half_width(access_O, n_O),
        'c_backhaul_I': _marginal_half_width(backhaul_I, n_I),
        'c_backhaul_O': _marginal_half_width(backhaul_O, n_O),
        'c_I': h_I,
        'c_O': h_O,
        'c_u': math.sqrt((q * h_I) ** 2 + ((1.0 - q) * h_O) ** 2),
    }
    assert set(half_widths) == set(PROBABILITY_FIELDS)
    return CoverageReport.compose(
        access_I, access_O, backhaul_I, backhaul_O, q,
        method='montecarlo',
        error=max(half_widths.values()),
        half_widths=half_widths,
        drops=n,
        resampled=counts['resampled'],
        flags=flags,
    )


def _write_records(records: List[dict], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8') as f:
        for record in sorted(records, key=lambda r: r['index']):
            f.write(json.dumps(record) + '\n')
    logger.info(f"📝 {len(records)} drop records written to {path}")


def estimate_coverage(p: NetworkParams, m: Optional[MitigationConfig] = None,
                      drops: Optional[int] = None, seed: Optional[int] = None,
                      region_radius: Optional[float] = None, workers: Optional[int] = None,
                      record_path=None, sinr_gating: Optional[bool] = None) -> CoverageReport:
    """
    Empirical coverage with 95% normal-approximation half-widths

    Drop i always uses the seeds drop_seed(seed, i, attempt), and the
    tallies are integer counts, so any worker count yields the same report.

    Args:
        p: Network parameters
        m: Mitigation scheme; distributed selection draws the interferer
           marks at the fraction the received-power rule implies
        drops: Number of drops (>= 100)
        seed: Master seed
        region_radius: Disc radius, defaults to default_region_radius(p)
        workers: Process count
        record_path: Optional JSON-lines file with one DropResult per drop
        sinr_gating: Gate interfering SBSs on their own backhaul SIR

    Returns:
        CoverageReport with method 'montecarlo'
    """
    settings = config.SIMULATION_SETTINGS
    m = m or MitigationConfig()
    drops = settings['drops'] if drops is None else int(drops)
    seed = settings['seed'] if seed is None else int(seed)
    workers = max(1, settings['workers'] if workers is None else int(workers))
    sinr_gating = settings['sinr_gating'] if sinr_gating is None else sinr_gating
    region_radius = default_region_radius(p) if region_radius is None else region_radius
    require(drops >= 100, f"at least 100 drops are needed, got {drops}", field='drops')

    marks = p
    if m.scheme is Scheme.DISTRIBUTED:
        marks = with_overrides(p, q=distributed_mode_fraction(m.tau, derive_model(p), p))

    logger.info(f"🎲 Monte Carlo: {drops} drops, seed {seed}, radius {region_radius:.3f}, "
                f"{workers} worker(s), scheme {m.scheme.value}")
    tasks = [
        {'params': marks, 'mitigation': m, 'seed': seed, 'start': a, 'stop': b,
         'region_radius': region_radius, 'sinr_gating': sinr_gating,
         'record': record_path is not None}
        for a, b in _chunks(drops, workers)
    ]
    if workers == 1:
        outputs = [_run_chunk(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_chunk, tasks))

    counts = dict.fromkeys(COUNT_KEYS, 0)
    records = []
    for chunk_counts, chunk_records in outputs:
        for key in COUNT_KEYS:
            counts[key] += chunk_counts[key]
        records.extend(chunk_records)
    if record_path is not None:
        _write_records(records, record_path)

    if counts['resampled']:
        logger.warning(f"⚠️ {counts['resampled']} empty topologies redrawn over {drops} drops")
    report = _compose(counts, marks, m)
    logger.info(f"🎲 c_I={report.c_I:.4f}±{report.half_widths['c_I']:.4f} "
                f"c_O={report.c_O:.4f}±{report.half_widths['c_O']:.4f} "
                f"c_u={report.c_u:.4f}±{report.half_widths['c_u']:.4f}")
    return report


__all__ = [
    'COUNT_KEYS',
    'drop_seed',
    'run_drop',
    'estimate_coverage',
]
