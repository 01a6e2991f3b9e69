"""
Numerical primitives: special functions and quadrature.
"""

from .specfun import hyp2f1_series, gauss_2f1, beta_fn, lower_inc_gamma, upper_inc_gamma
from .quadrature import CharacteristicFunction, QuadratureSettings, integrate_adaptive, gil_pelaez_cdf

__all__ = [
    'hyp2f1_series',
    'gauss_2f1',
    'beta_fn',
    'lower_inc_gamma',
    'upper_inc_gamma',
    'CharacteristicFunction',
    'QuadratureSettings',
    'integrate_adaptive',
    'gil_pelaez_cdf',
]
