"""
Laplace transforms of the interference terms.

Every transform accepts real t >= 0 or complex t = -jw (the Gil-Pelaez
path); powers use the principal branch. Shapes broadcast.
"""

import logging
import math
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import special

from network.model import DerivedModel
from network.params import NetworkParams
from numerics.specfun import beta_fn, gauss_2f1, upper_inc_gamma

logger = logging.getLogger(__name__)

# nodes of the nearest-CN average under interference rejection
REJECTION_NODES = 64


def _as_array(t) -> np.ndarray:
    t = np.asarray(t)
    return t.astype(complex) if np.iscomplexobj(t) else t.astype(float)


def _finish(value: np.ndarray, t) -> np.ndarray:
    if np.ndim(value) == 0 or (np.ndim(t) == 0 and np.size(value) == 1):
        value = value.reshape(-1)[0]
        return complex(value) if np.iscomplexobj(value) else float(value)
    return value


def laplace_I_su(t, r_su: float, d: DerivedModel, p: NetworkParams,
                 intensity: Optional[float] = None):
    """
    SBS-to-user interference outside the serving distance r_su

    exp(-pi lam r^2 (2F1[k, -2/beta; 1-2/beta; -t P_s theta / r^beta] - 1))
    with k = k_user, theta = 1/k_user; lam defaults to the IBFD interferers.
    """
    lam = d.lambda_bar_sI if intensity is None else intensity
    t_arr = _as_array(t)
    if lam == 0.0:
        return _finish(np.ones(np.broadcast(t_arr, np.asarray(r_su)).shape,
                               dtype=t_arr.dtype), t)
    delta = p.delta
    r = np.asarray(r_su, dtype=float)
    z = -t_arr * p.P_s * p.theta_user / r ** p.beta
    hyper = gauss_2f1(p.k_user, -delta, 1.0 - delta, z)
    value = np.exp(-math.pi * lam * r ** 2 * (np.asarray(hyper) - 1.0))
    return _finish(np.asarray(value), t)


def laplace_I_cu(t, d: DerivedModel, p: NetworkParams):
    """CN-to-user interference, no exclusion: exp(-pi lam_c (t P_c)^(2/beta) G(1-2/beta))"""
    t_arr = _as_array(t)
    delta = p.delta
    value = np.exp(-math.pi * d.lambda_c * (t_arr * p.P_c) ** delta * special.gamma(1.0 - delta))
    return _finish(np.asarray(value), t)


def ss_coefficient(k: float, beta: float) -> float:
    """-(2/beta) B(k + 2/beta, -2/beta) = G(1-2/beta) G(k+2/beta) / G(k)"""
    delta = 2.0 / beta
    return -delta * beta_fn(k + delta, -delta)


def ss_coefficient_rayleigh(beta: float) -> float:
    """k = 1 shortcut: (2 pi / beta) csc(2 pi / beta)"""
    angle = 2.0 * math.pi / beta
    return angle / math.sin(angle)


def laplace_I_ss(t, d: DerivedModel, p: NetworkParams, intensity: Optional[float] = None,
                 use_rayleigh_form: Optional[bool] = None):
    """
    SBS-to-SBS interference at a backhauled IBFD SBS

    exp(-pi lam C_k (t P_s theta)^(2/beta)); C_k from the Beta function, or
    from the cosecant form when k_sbs = 1.
    """
    lam = d.lambda_bar_sI if intensity is None else intensity
    t_arr = _as_array(t)
    if use_rayleigh_form is None:
        use_rayleigh_form = p.k_sbs == 1.0
    coeff = ss_coefficient_rayleigh(p.beta) if use_rayleigh_form else ss_coefficient(p.k_sbs, p.beta)
    value = np.exp(-math.pi * lam * coeff * (t_arr * p.P_s * p.theta_sbs) ** p.delta)
    return _finish(np.asarray(value), t)


def laplace_I_cs(t, r_cs, d: DerivedModel, p: NetworkParams):
    """
    CN interference outside an exclusion ball of radius r_cs

    exp(-pi lam_c [(G(1-2/beta) + (2/beta) G_u(-2/beta; t P_c / r^beta)) (t P_c)^(2/beta) - r^2])
    """
    t_arr = _as_array(t)
    r = np.asarray(r_cs, dtype=float)
    t_b, r_b = np.broadcast_arrays(t_arr, r)
    out = np.ones(t_b.shape, dtype=t_b.dtype)
    live = t_b != 0.0
    if np.any(live):
        delta = p.delta
        tl, rl = t_b[live], r_b[live]
        incomplete = upper_inc_gamma(-delta, tl * p.P_c / rl ** p.beta)
        bracket = (special.gamma(1.0 - delta) + delta * np.asarray(incomplete)) \
            * (tl * p.P_c) ** delta - rl ** 2
        out[live] = np.exp(-math.pi * d.lambda_c * bracket)
    return _finish(out, t)


@lru_cache(maxsize=4)
def _laguerre_rule(n: int):
    return np.polynomial.laguerre.laggauss(n)


def laplace_I_cu_rejected(t, d: DerivedModel, p: NetworkParams, nodes: int = REJECTION_NODES):
    """
    CN-to-user interference with the serving SBS's CN nulled

    The remaining CNs are taken outside the nearest-CN distance, averaged
    over f(r) = 2 pi lam_c r exp(-pi lam_c r^2) with Gauss-Laguerre in
    u = pi lam_c r^2.
    """
    t_arr = np.atleast_1d(_as_array(t))
    u, weights = _laguerre_rule(nodes)
    r = np.sqrt(u / (math.pi * d.lambda_c))
    values = laplace_I_cs(t_arr[:, None], r[None, :], d, p)
    value = np.asarray(values) @ weights
    if np.ndim(t) == 0:
        return complex(value[0]) if np.iscomplexobj(value) else float(value[0])
    return value.reshape(np.shape(t))


__all__ = [
    'laplace_I_su',
    'laplace_I_cu',
    'laplace_I_ss',
    'laplace_I_cs',
    'laplace_I_cu_rejected',
    'ss_coefficient',
    'ss_coefficient_rayleigh',
]
