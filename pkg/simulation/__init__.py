"""
Monte Carlo path: seeded PPP drops, per-drop SINRs and empirical coverage.
"""

from .topology import Topology, associate, default_region_radius, sample_topology
from .drop import DropResult, bia_stream_powers, evaluate_drop, select_mode
from .estimator import COUNT_KEYS, drop_seed, estimate_coverage, run_drop

__all__ = [
    # topology
    'Topology',
    'sample_topology',
    'associate',
    'default_region_radius',
    # drop
    'DropResult',
    'evaluate_drop',
    'select_mode',
    'bia_stream_powers',
    # estimator
    'COUNT_KEYS',
    'drop_seed',
    'run_drop',
    'estimate_coverage',
]
