"""
Deterministic derivations from NetworkParams: displaced intensities,
interferer intensities, rate thresholds, backhaul access and pilot reuse.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from network.load import LoadDistribution, load_distribution
from network.params import Mode, NetworkParams
from utils.errors import RegimeError, require

logger = logging.getLogger(__name__)


def lognormal_fractional_moment(mu: float, sigma: float, beta: float) -> float:
    """E[S^(2/beta)] for S = exp(mu + sigma N), N standard normal"""
    require(beta > 2.0, f"beta must exceed 2, got {beta}")
    require(sigma >= 0.0, f"sigma must be >= 0, got {sigma}")
    return math.exp(2.0 * mu / beta + 0.5 * (2.0 * sigma / beta) ** 2)


@dataclass(frozen=True)
class DerivedModel:
    """Quantities the analytic path consumes, all after displacement"""
    lambda_c: float
    lambda_s: float
    lambda_bar_sI: float
    lambda_bar_sO: float
    mean_load: float
    I_SI: float
    gamma_aI: float
    gamma_aO: float
    shadow_moment: float
    load: LoadDistribution

    @property
    def served_intensity(self) -> float:
        """min(lambda_s/lambda_c, S_max) * lambda_c, intensity of backhauled SBSs"""
        return self.lambda_bar_sI + self.lambda_bar_sO

    def gamma_access(self, mode: Mode) -> float:
        return self.gamma_aI if mode is Mode.IBFD else self.gamma_aO

    def lambda_bar(self, mode: Mode) -> float:
        return self.lambda_bar_sI if mode is Mode.IBFD else self.lambda_bar_sO


def derive_model(p: NetworkParams) -> DerivedModel:
    """
    Apply the displacement theorem and build thresholds and intensities

    Args:
        p: Raw parameters

    Returns:
        DerivedModel, bit-identical for identical inputs
    """
    moment = lognormal_fractional_moment(p.shadow_mu, p.shadow_sigma, p.beta)
    lambda_c = p.lambda_c_raw * moment
    lambda_s = p.lambda_s_raw * moment
    mean_load = lambda_s / lambda_c
    served = min(mean_load, float(p.S_max)) * lambda_c

    return DerivedModel(
        lambda_c=lambda_c,
        lambda_s=lambda_s,
        lambda_bar_sI=p.q * served,
        lambda_bar_sO=(1.0 - p.q) * served,
        mean_load=mean_load,
        I_SI=p.P_s / p.xi_linear,
        gamma_aI=2.0 ** p.R_th - 1.0,
        gamma_aO=2.0 ** (2.0 * p.R_th) - 1.0,
        shadow_moment=moment,
        load=load_distribution(mean_load),
    )


def backhaul_access_prob(n_s: Union[int, np.ndarray], s_max: int):
    """alpha = min(1, S_max / N_s)"""
    n_arr = np.asarray(n_s, dtype=float)
    require(bool(np.all(n_arr >= 1)), "backhaul access needs N_s >= 1")
    require(s_max >= 1, "S_max must be >= 1")
    value = np.minimum(1.0, s_max / n_arr)
    return float(value) if np.ndim(value) == 0 else value


def combinatorial_access_prob(n_s: int, s_max: int) -> float:
    """Chance a given SBS is in a uniform S_max-subset of N_s SBSs, C(N-1, S-1)/C(N, S)"""
    require(n_s >= 1 and s_max >= 1, "combinatorial access needs N_s, S_max >= 1")
    if n_s <= s_max:
        return 1.0
    return float(special.comb(n_s - 1, s_max - 1, exact=True) / special.comb(n_s, s_max, exact=True))


def backhaul_threshold(n_s: Union[int, np.ndarray], p: NetworkParams, mode: Mode):
    """
    Backhaul SIR threshold for a CN serving n_s SBSs

    With m = min(n_s, S_max) and alpha = min(1, S_max/n_s):
    IBFD (m / (M-m+1)) (2^(R/alpha) - 1), OBFD (m / (M-m+1)) (2^(2R/alpha) - 1).

    Raises:
        RegimeError: M <= m for some n_s
    """
    n_arr = np.asarray(n_s, dtype=float)
    require(bool(np.all(n_arr >= 1)), "backhaul threshold needs N_s >= 1")
    m = np.minimum(n_arr, float(p.S_max))
    require(bool(np.all(p.M > m)), f"massive-MIMO regime violated: M={p.M} <= min(N_s, S_max)",
            exc=RegimeError, M=p.M)
    alpha = np.minimum(1.0, p.S_max / n_arr)
    rate = p.R_th if mode is Mode.IBFD else 2.0 * p.R_th
    value = m / (p.M - m + 1.0) * (2.0 ** (rate / alpha) - 1.0)
    return float(value) if np.ndim(value) == 0 else value


def pilot_contamination_intensity(d: DerivedModel, load: LoadDistribution, s_max: int) -> float:
    """Intensity of CNs reusing a given pilot, lambda_c (1 - sum_{n<=S} (1 - n/S) P(n))"""
    n = load.support[:s_max + 1]
    unused = float(np.sum((1.0 - n / s_max) * load.pmf[:s_max + 1]))
    return d.lambda_c * (1.0 - unused)


__all__ = [
    'lognormal_fractional_moment',
    'DerivedModel',
    'derive_model',
    'backhaul_access_prob',
    'combinatorial_access_prob',
    'backhaul_threshold',
    'pilot_contamination_intensity',
]
