"""
Number of SBSs associated with a generic CN.

Gamma-Voronoi approximation with shape b = 3.575.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

import config
from utils.errors import require

logger = logging.getLogger(__name__)

SHAPE_B = config.LOAD_SETTINGS['shape_b']


def _log_pmf(mean_load: float, n: np.ndarray, b: float) -> np.ndarray:
    return (b * np.log(b) + special.gammaln(n + b) + n * np.log(mean_load)
            - special.gammaln(n + 1.0) - special.gammaln(b) - (n + b) * np.log(b + mean_load))


def load_pmf(mean_load: float, n: Union[int, np.ndarray], b: float = SHAPE_B):
    """
    P(N_s = n) = b^b G(n+b) E^n / (G(n+1) G(b) (b+E)^(n+b)), evaluated in log space

    Args:
        mean_load: E[N_s] = lambda_s / lambda_c
        n: Load value(s), n >= 0

    Returns:
        Probability (array if n is an array)
    """
    require(mean_load > 0.0, f"mean load must be positive, got {mean_load}")
    n_arr = np.asarray(n, dtype=float)
    require(bool(np.all(n_arr >= 0)), "load must be >= 0")
    value = np.exp(_log_pmf(mean_load, n_arr, b))
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class LoadDistribution:
    """Truncated load PMF, pmf[n] = P(N_s = n) for n = 0..n_max"""
    pmf: np.ndarray
    mean_load: float
    shape_b: float = SHAPE_B

    @property
    def n_max(self) -> int:
        return len(self.pmf) - 1

    @property
    def support(self) -> np.ndarray:
        return np.arange(len(self.pmf))

    @property
    def total_mass(self) -> float:
        return float(self.pmf.sum())

    @property
    def mean(self) -> float:
        return float(self.support @ self.pmf)

    def conditioned_on_served(self) -> 'LoadDistribution':
        """PMF renormalised over n >= 1 (the tagged SBS's own CN serves it)"""
        pmf = self.pmf.copy()
        pmf[0] = 0.0
        mass = pmf.sum()
        require(mass > 0.0, "load distribution has no mass at n >= 1")
        return LoadDistribution(pmf=pmf / mass, mean_load=self.mean_load, shape_b=self.shape_b)


def load_distribution(mean_load: float, tail_mass: float = None) -> LoadDistribution:
    """
    Truncate the load PMF at the smallest n with cumulative mass >= 1 - tail_mass

    The search is capped at max(cap_factor * mean_load, cap_factor).
    """
    settings = config.LOAD_SETTINGS
    tail_mass = settings['tail_mass'] if tail_mass is None else tail_mass
    cap = int(np.ceil(max(settings['cap_factor'] * mean_load, settings['cap_factor'])))
    pmf = load_pmf(mean_load, np.arange(cap + 1), settings['shape_b'])
    cumulative = np.cumsum(pmf)
    hits = np.nonzero(cumulative >= 1.0 - tail_mass)[0]
    if len(hits):
        n_max = int(hits[0])
    else:
        n_max = cap
        logger.warning(f"⚠️ Load PMF truncated at cap {cap} with mass {cumulative[-1]:.8f}")
    return LoadDistribution(pmf=pmf[:n_max + 1], mean_load=mean_load, shape_b=settings['shape_b'])


__all__ = [
    'SHAPE_B',
    'load_pmf',
    'LoadDistribution',
    'load_distribution',
]
