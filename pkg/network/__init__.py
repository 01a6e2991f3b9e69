"""
Network model: parameters, displacement-corrected derivations and load statistics.
"""

from .params import Mode, Scheme, NetworkParams, MitigationConfig, with_overrides
from .load import SHAPE_B, load_pmf, LoadDistribution, load_distribution
from .model import (
    lognormal_fractional_moment, DerivedModel, derive_model,
    backhaul_access_prob, combinatorial_access_prob, backhaul_threshold,
    pilot_contamination_intensity
)

__all__ = [
    # params
    'Mode',
    'Scheme',
    'NetworkParams',
    'MitigationConfig',
    'with_overrides',

    # load
    'SHAPE_B',
    'load_pmf',
    'LoadDistribution',
    'load_distribution',

    # derivations
    'lognormal_fractional_moment',
    'DerivedModel',
    'derive_model',
    'backhaul_access_prob',
    'combinatorial_access_prob',
    'backhaul_threshold',
    'pilot_contamination_intensity',
]
