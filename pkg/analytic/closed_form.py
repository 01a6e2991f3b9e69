"""
Interference-limited closed forms with Rayleigh access fading.
"""

import logging
from typing import Union

import numpy as np
from scipy import special

from network.model import DerivedModel
from network.params import Mode, NetworkParams
from numerics.specfun import gauss_2f1
from utils.errors import AssumptionError, require

logger = logging.getLogger(__name__)


def hyper_term(gamma: float, beta: float) -> float:
    """2F1[1, -2/beta; 1-2/beta; -gamma] - 1"""
    delta = 2.0 / beta
    return float(gauss_2f1(1.0, -delta, 1.0 - delta, -gamma)) - 1.0


def approx_hyper_term(gamma: float, beta: float) -> float:
    """Linearised 2F1 term, 2 gamma / (beta - 2)"""
    return 2.0 * gamma / (beta - 2.0)


def constant_A(d: DerivedModel, p: NetworkParams) -> float:
    """A = G(1-2/beta) lam_c (gamma_aI P_c / (P_s theta))^(2/beta), independent of q"""
    delta = p.delta
    return float(special.gamma(1.0 - delta) * d.lambda_c
                 * (d.gamma_aI * p.P_c / (p.P_s * p.theta_user)) ** delta)


def check_rayleigh(p: NetworkParams, what: str) -> None:
    require(p.k_user == 1.0, f"{what} assumes Rayleigh access fading (k_user=1), got k_user={p.k_user}",
            exc=AssumptionError, field='k_user')
    require(p.N0 == 0.0, f"{what} assumes an interference-limited network (N0=0), got N0={p.N0}",
            exc=AssumptionError, field='N0')


def access_coverage_rayleigh(d: DerivedModel, p: NetworkParams, mode: Mode) -> float:
    """
    Access coverage with Rayleigh fading and no noise

    IBFD: lam_s / (lam_sI H(gamma_aI) + lam_s + A); OBFD drops A and uses lam_sO, gamma_aO.
    """
    check_rayleigh(p, "closed-form access coverage")
    if mode is Mode.IBFD:
        return d.lambda_s / (d.lambda_bar_sI * hyper_term(d.gamma_aI, p.beta) + d.lambda_s + constant_A(d, p))
    return d.lambda_s / (d.lambda_bar_sO * hyper_term(d.gamma_aO, p.beta) + d.lambda_s)


def access_coverage_approx(d: DerivedModel, p: NetworkParams, mode: Mode) -> float:
    """Same as the Rayleigh form with 2F1 - 1 replaced by 2 gamma / (beta - 2)"""
    if mode is Mode.IBFD:
        return d.lambda_s / (d.lambda_bar_sI * approx_hyper_term(d.gamma_aI, p.beta)
                             + d.lambda_s + constant_A(d, p))
    return d.lambda_s / (d.lambda_bar_sO * approx_hyper_term(d.gamma_aO, p.beta) + d.lambda_s)


def user_coverage_perfect_backhaul(q: Union[float, np.ndarray], d: DerivedModel, p: NetworkParams,
                                   approx: bool = False):
    """
    Typical-user access coverage c_u(q) with perfect backhaul

    Rebuilds both interferer intensities from q so the curve can be scanned
    without re-deriving the model.
    """
    q_arr = np.asarray(q, dtype=float)
    served = d.served_intensity
    if approx:
        h_I = approx_hyper_term(d.gamma_aI, p.beta)
        h_O = approx_hyper_term(d.gamma_aO, p.beta)
    else:
        check_rayleigh(p, "perfect-backhaul user coverage")
        h_I = hyper_term(d.gamma_aI, p.beta)
        h_O = hyper_term(d.gamma_aO, p.beta)
    A = constant_A(d, p)
    c_I = d.lambda_s / (q_arr * served * h_I + d.lambda_s + A)
    c_O = d.lambda_s / ((1.0 - q_arr) * served * h_O + d.lambda_s)
    value = q_arr * c_I + (1.0 - q_arr) * c_O
    return float(value) if np.ndim(value) == 0 else value


def distributed_mode_fraction(tau: float, d: DerivedModel, p: NetworkParams) -> float:
    """
    IBFD fraction under the received-power mode rule

    (1 + (lam_c/lam_s) (tau P_c / P_s)^(2/beta))^-1, with raw intensities
    unless p.mode_selection_raw_intensities is off.
    """
    require(tau > 0.0, f"tau must be positive, got {tau}", field='tau')
    if p.mode_selection_raw_intensities:
        ratio = p.lambda_c_raw / p.lambda_s_raw
    else:
        ratio = d.lambda_c / d.lambda_s
    return 1.0 / (1.0 + ratio * (tau * p.P_c / p.P_s) ** p.delta)


__all__ = [
    'hyper_term',
    'approx_hyper_term',
    'constant_A',
    'check_rayleigh',
    'access_coverage_rayleigh',
    'access_coverage_approx',
    'user_coverage_perfect_backhaul',
    'distributed_mode_fraction',
]
