"""
One Monte Carlo realisation of the network around a typical user at the origin.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

import config
from network.params import NetworkParams
from utils.errors import DegenerateTopologyError, require

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]


@dataclass
class Topology:
    """
    CN and SBS point sets with their marks and channel draws

    Shadowing matrices are indexed [transmitter, receiver]. Association
    fields stay None until associate() runs.
    """
    region_radius: float
    cn_xy: np.ndarray
    sbs_xy: np.ndarray
    ibfd: np.ndarray
    shadow_cu: np.ndarray
    shadow_su: np.ndarray
    shadow_cs: np.ndarray
    shadow_ss: np.ndarray
    fading_su: np.ndarray
    fading_ss: np.ndarray
    priority: np.ndarray
    pilot_draw: np.ndarray
    seed: Optional[Seed] = None
    serving_sbs: Optional[int] = None
    serving_cn: Optional[np.ndarray] = None
    load: Optional[np.ndarray] = None
    served: Optional[np.ndarray] = None

    @property
    def n_cn(self) -> int:
        return len(self.cn_xy)

    @property
    def n_sbs(self) -> int:
        return len(self.sbs_xy)

    @property
    def is_associated(self) -> bool:
        return self.serving_sbs is not None

    def user_distances(self):
        """(CN, SBS) distances to the typical user at the origin"""
        return np.hypot(*self.cn_xy.T), np.hypot(*self.sbs_xy.T)

    def cn_sbs_distances(self) -> np.ndarray:
        delta = self.cn_xy[:, None, :] - self.sbs_xy[None, :, :]
        return np.hypot(delta[..., 0], delta[..., 1])

    def sbs_sbs_distances(self) -> np.ndarray:
        delta = self.sbs_xy[:, None, :] - self.sbs_xy[None, :, :]
        dist = np.hypot(delta[..., 0], delta[..., 1])
        np.fill_diagonal(dist, np.inf)
        return dist


def default_region_radius(p: NetworkParams) -> float:
    """max(f / sqrt(pi lam'_c), f / sqrt(pi lam'_s)) with f = region_factor"""
    factor = config.SIMULATION_SETTINGS['region_factor']
    return max(factor / math.sqrt(math.pi * p.lambda_c_raw),
               factor / math.sqrt(math.pi * p.lambda_s_raw))


def _uniform_disc(rng: np.random.Generator, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(count))
    angle = 2.0 * math.pi * rng.random(count)
    return np.column_stack([r * np.cos(angle), r * np.sin(angle)])


def sample_topology(p: NetworkParams, region_radius: Optional[float] = None,
                    seed: Seed = 0) -> Topology:
    """
    Draw Poisson CN and SBS sets in a disc and all their channel marks

    Shadowing exp(mu + sigma N) on every link, Gamma(k, 1/k) fading on the
    SBS-originated links only. IBFD marks are Bernoulli(q).

    Raises:
        DegenerateTopologyError: no SBS or no CN fell inside the region
    """
    radius = default_region_radius(p) if region_radius is None else region_radius
    require(radius > 0.0, f"region radius must be positive, got {radius}")
    rng = np.random.default_rng(seed)
    area = math.pi * radius ** 2

    n_cn = int(rng.poisson(p.lambda_c_raw * area))
    n_sbs = int(rng.poisson(p.lambda_s_raw * area))
    if n_cn == 0 or n_sbs == 0:
        raise DegenerateTopologyError(f"empty drop: {n_cn} CNs, {n_sbs} SBSs", n_cn=n_cn, n_sbs=n_sbs)

    def shadow(*shape):
        return np.exp(p.shadow_mu + p.shadow_sigma * rng.standard_normal(shape))

    cn_xy = _uniform_disc(rng, n_cn, radius)
    sbs_xy = _uniform_disc(rng, n_sbs, radius)
    return Topology(
        region_radius=radius,
        cn_xy=cn_xy,
        sbs_xy=sbs_xy,
        ibfd=rng.random(n_sbs) < p.q,
        shadow_cu=shadow(n_cn),
        shadow_su=shadow(n_sbs),
        shadow_cs=shadow(n_cn, n_sbs),
        shadow_ss=shadow(n_sbs, n_sbs),
        fading_su=rng.gamma(p.k_user, p.theta_user, n_sbs),
        fading_ss=rng.gamma(p.k_sbs, p.theta_sbs, (n_sbs, n_sbs)),
        priority=rng.random(n_sbs),
        pilot_draw=rng.random(n_cn),
        seed=seed,
    )


def associate(t: Topology, p: NetworkParams) -> Topology:
    """
    Strongest-average-power association, loads and backhaul-served flags

    The user picks the SBS maximising P_s S r^-beta; every SBS picks the CN
    maximising P_c S r^-beta. Each CN serves the min(N_s, S_max) SBSs with
    the smallest random priority.
    """
    require(t.n_cn > 0 and t.n_sbs > 0, "association needs CNs and SBSs", exc=DegenerateTopologyError)
    _, r_su = t.user_distances()
    t.serving_sbs = int(np.argmax(p.P_s * t.shadow_su * r_su ** (-p.beta)))

    received = p.P_c * t.shadow_cs * t.cn_sbs_distances() ** (-p.beta)
    t.serving_cn = np.argmax(received, axis=0)
    t.load = np.bincount(t.serving_cn, minlength=t.n_cn)

    order = np.lexsort((t.priority, t.serving_cn))
    grouped = t.serving_cn[order]
    rank_sorted = np.arange(t.n_sbs) - np.searchsorted(grouped, grouped, side='left')
    rank = np.empty(t.n_sbs, dtype=int)
    rank[order] = rank_sorted
    t.served = rank < p.S_max
    return t


__all__ = [
    'Seed',
    'Topology',
    'default_region_radius',
    'sample_topology',
    'associate',
]
