"""
Analytic coverage: Laplace transforms, Gil-Pelaez coverage, closed forms and IBFD fractions.
"""

from .report import CoverageReport, METHODS, PROBABILITY_FIELDS
from .laplace import (
    laplace_I_su, laplace_I_cu, laplace_I_ss, laplace_I_cs, laplace_I_cu_rejected,
    ss_coefficient, ss_coefficient_rayleigh
)
from .closed_form import (
    hyper_term, approx_hyper_term, constant_A, access_coverage_rayleigh,
    access_coverage_approx, user_coverage_perfect_backhaul, distributed_mode_fraction
)
from .coverage import (
    access_coverage, access_coverage_with_IR, backhaul_coverage, backhaul_coverage_by_load, rate_coverage
)
from .optimize import Fraction, q_balance, q_star, balance_root

__all__ = [
    'CoverageReport',
    'METHODS',
    'PROBABILITY_FIELDS',
    'laplace_I_su',
    'laplace_I_cu',
    'laplace_I_ss',
    'laplace_I_cs',
    'laplace_I_cu_rejected',
    'ss_coefficient',
    'ss_coefficient_rayleigh',
    'hyper_term',
    'approx_hyper_term',
    'constant_A',
    'access_coverage_rayleigh',
    'access_coverage_approx',
    'user_coverage_perfect_backhaul',
    'distributed_mode_fraction',
    'access_coverage',
    'access_coverage_with_IR',
    'backhaul_coverage',
    'backhaul_coverage_by_load',
    'rate_coverage',
    'Fraction',
    'q_balance',
    'q_star',
    'balance_root',
]
