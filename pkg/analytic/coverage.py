"""
Gil-Pelaez coverage of the access and backhaul links and their composition.
"""

import logging
import math
from typing import Optional

import numpy as np

import config
from analytic.closed_form import (
    access_coverage_approx, access_coverage_rayleigh, distributed_mode_fraction
)
from analytic.laplace import (
    laplace_I_cs, laplace_I_cu, laplace_I_cu_rejected, laplace_I_ss, laplace_I_su
)
from analytic.report import CoverageReport
from network.load import LoadDistribution
from network.model import DerivedModel, backhaul_threshold, derive_model
from network.params import MitigationConfig, Mode, NetworkParams, Scheme, with_overrides
from numerics.quadrature import QuadratureSettings, gil_pelaez_cdf, integrate_adaptive
from utils.errors import AssumptionError, require

logger = logging.getLogger(__name__)

VARIANTS = ('exact', 'rayleigh', 'approx')


def _distance_horizon() -> float:
    """u = pi lam r^2 beyond which the nearest-point law has mass < DISTANCE_TAIL_MASS"""
    return -math.log(config.DISTANCE_TAIL_MASS)


def _rayleigh_average(conditional, intensity: float, settings: QuadratureSettings):
    """
    E[g(r)] for r the nearest point of a PPP of the given intensity

    Integrates e^-u g(sqrt(u / (pi lam))) over u. `conditional` takes the
    whole node array and returns (values, error) with values shaped
    (..., nodes); the largest inner error is added to the outer one.
    """
    inner_error = [0.0]

    def integrand(u: np.ndarray) -> np.ndarray:
        values, err = conditional(np.sqrt(u / (math.pi * intensity)))
        inner_error[0] = max(inner_error[0], err)
        return np.exp(-u) * values

    value, outer_error = integrate_adaptive(integrand, 0.0, _distance_horizon(), settings)
    return value, outer_error + inner_error[0]


def access_coverage(mode: Mode, d: DerivedModel, p: NetworkParams,
                    settings: Optional[QuadratureSettings] = None,
                    rejection: bool = False, full_output: bool = False):
    """
    P(SINR_a > gamma_a) for an SBS in the given mode

    Conditioned on the serving distance r, coverage is P(Z < 0) for
    Z = I_agg + N0 - (P_s / (gamma r^beta)) F with F ~ Gamma(k, 1/k), whose
    characteristic function is L_I(-jw) e^{jwN0} (1 + j c w theta)^-k.
    OBFD keeps only the OBFD SBS interference.

    Args:
        mode: IBFD or OBFD
        d, p: Model and parameters
        settings: Quadrature settings
        rejection: Null the serving SBS's CN (IBFD only)
        full_output: Also return the error estimate

    Returns:
        Coverage probability
    """
    settings = settings or QuadratureSettings.from_config()
    gamma = d.gamma_access(mode)
    if gamma <= 0.0:
        return (1.0, 0.0) if full_output else 1.0
    lam_bar = d.lambda_bar(mode)
    k, theta = p.k_user, p.theta_user

    def conditional(r: np.ndarray):
        c = p.P_s / (gamma * r ** p.beta)

        def phi(w: np.ndarray, rows: np.ndarray) -> np.ndarray:
            s = -1j * w
            value = np.asarray(laplace_I_su(s[None, :], r[rows][:, None], d, p, intensity=lam_bar),
                               dtype=complex)
            if mode is Mode.IBFD:
                cn = laplace_I_cu_rejected(s, d, p) if rejection else laplace_I_cu(s, d, p)
                value = value * np.asarray(cn)[None, :]
            fading = (1.0 + 1j * theta * np.outer(c[rows], w)) ** (-k)
            return value * np.exp(1j * w * p.N0)[None, :] * fading

        return gil_pelaez_cdf(phi, np.zeros_like(r), settings, support="real", scale=c,
                              full_output=True, batched=True)

    value, error = _rayleigh_average(conditional, d.lambda_s, settings)
    value = min(1.0, max(0.0, float(value)))
    logger.debug(f"🧮 access {mode.value}: {value:.6f} (err {error:.2e})")
    return (value, error) if full_output else value


def access_coverage_with_IR(d: DerivedModel, p: NetworkParams,
                            settings: Optional[QuadratureSettings] = None, full_output: bool = False):
    """IBFD access coverage with the serving SBS's CN interference rejected"""
    if p.M < 2 * min(d.mean_load, p.S_max):
        logger.warning(f"⚠️ Interference rejection with M={p.M} < 2 min(E[N_s], S_max); "
                       f"not enough spatial degrees of freedom for the extra null")
    return access_coverage(Mode.IBFD, d, p, settings, rejection=True, full_output=full_output)


def backhaul_coverage_by_load(mode: Mode, d: DerivedModel, p: NetworkParams, loads,
                              settings: Optional[QuadratureSettings] = None, full_output: bool = False):
    """
    P(SIR_b > gamma_b(n)) for each load n, averaged over the serving-CN distance

    Given r the SIR condition is I_ss + I_cs < P_c / (gamma_b(n) r^beta) - I_SI.
    Every (r, n) pair of a distance-node batch goes through one Gil-Pelaez
    call; I_cs is evaluated once per distance. OBFD uses I_SI = 0.

    Raises:
        RegimeError: M <= min(n, S_max) for some requested load
    """
    settings = settings or QuadratureSettings.from_config()
    n = np.atleast_1d(np.asarray(loads, dtype=int))
    thresholds = np.atleast_1d(np.asarray(backhaul_threshold(n, p, mode), dtype=float))
    i_si = d.I_SI if mode is Mode.IBFD else 0.0

    def conditional(r: np.ndarray):
        x = p.P_c / (r[:, None] ** p.beta * thresholds[None, :]) - i_si
        owner = np.repeat(np.arange(len(r)), len(n))

        def phi(w: np.ndarray, rows: np.ndarray) -> np.ndarray:
            s = -1j * w
            distances, inverse = np.unique(owner[rows], return_inverse=True)
            cs = np.asarray(laplace_I_cs(s[None, :], r[distances][:, None], d, p), dtype=complex)
            ss = np.asarray(laplace_I_ss(s, d, p), dtype=complex)
            return ss[None, :] * cs[inverse.reshape(-1)]

        cdf, err = gil_pelaez_cdf(phi, x.reshape(-1), settings, full_output=True, batched=True)
        return cdf.reshape(len(r), len(n)).T, err

    value, error = _rayleigh_average(conditional, d.lambda_c, settings)
    value = np.clip(np.asarray(value, dtype=float).reshape(n.shape), 0.0, 1.0)
    return (value, error) if full_output else value


def backhaul_coverage(mode: Mode, d: DerivedModel, p: NetworkParams,
                      load: Optional[LoadDistribution] = None,
                      settings: Optional[QuadratureSettings] = None, full_output: bool = False):
    """
    Load-averaged P(SIR_b > gamma_b(N_s))

    Raises:
        RegimeError: M <= min(n, S_max) somewhere in the load support
    """
    load = (load or d.load).conditioned_on_served()
    n = load.support[load.pmf > 0.0]
    weights = load.pmf[n]
    by_load, error = backhaul_coverage_by_load(mode, d, p, n, settings, full_output=True)
    value = min(1.0, max(0.0, float(weights @ by_load)))
    logger.debug(f"🧮 backhaul {mode.value}: {value:.6f} over {len(n)} loads (err {error:.2e})")
    return (value, error) if full_output else value


def rate_coverage(d: DerivedModel, p: NetworkParams, load: Optional[LoadDistribution] = None,
                  mitigation: Optional[MitigationConfig] = None,
                  settings: Optional[QuadratureSettings] = None,
                  variant: str = 'exact', perfect_backhaul: bool = False) -> CoverageReport:
    """
    Compose access and backhaul coverage into a CoverageReport

    Args:
        d, p: Model and parameters
        load: Load distribution, defaults to d.load
        mitigation: Interference rejection or distributed mode selection
        settings: Quadrature settings
        variant: 'exact' (Gil-Pelaez), 'rayleigh' or 'approx' (closed-form access)
        perfect_backhaul: Skip the backhaul integrals (coverage 1)

    Raises:
        AssumptionError: BIA or pilot contamination requested, or closed forms outside their assumptions
    """
    require(variant in VARIANTS, f"unknown analytic variant '{variant}'")
    mitigation = mitigation or MitigationConfig()
    require(not mitigation.scheme.uses_bia,
            f"{mitigation.scheme.value} has no analytic model; use the Monte Carlo path",
            exc=AssumptionError, field='scheme')
    require(not mitigation.pilot_contamination,
            "pilot contamination has no analytic model; use the Monte Carlo path",
            exc=AssumptionError, field='pilot_contamination')
    settings = settings or QuadratureSettings.from_config()
    load = load or d.load
    flags = []

    if mitigation.scheme is Scheme.DISTRIBUTED:
        q = distributed_mode_fraction(mitigation.tau, d, p)
        p = with_overrides(p, q=q)
        d = derive_model(p)
        flags.append(f"q_from_tau={q:.6f}")

    errors = []
    if variant == 'exact':
        if mitigation.scheme is Scheme.IR:
            access_I, err_I = access_coverage_with_IR(d, p, settings, full_output=True)
        else:
            access_I, err_I = access_coverage(Mode.IBFD, d, p, settings, full_output=True)
        access_O, err_O = access_coverage(Mode.OBFD, d, p, settings, full_output=True)
        errors += [err_I, err_O]
    else:
        require(mitigation.scheme is not Scheme.IR,
                "interference rejection is only modelled by the exact variant",
                exc=AssumptionError, field='scheme')
        closed = access_coverage_rayleigh if variant == 'rayleigh' else access_coverage_approx
        access_I = closed(d, p, Mode.IBFD)
        access_O = closed(d, p, Mode.OBFD)

    if perfect_backhaul:
        backhaul_I = backhaul_O = 1.0
        flags.append("perfect_backhaul")
    else:
        backhaul_I, err_bI = backhaul_coverage(Mode.IBFD, d, p, load, settings, full_output=True)
        backhaul_O, err_bO = backhaul_coverage(Mode.OBFD, d, p, load, settings, full_output=True)
        errors += [err_bI, err_bO]

    report = CoverageReport.compose(
        access_I, access_O, backhaul_I, backhaul_O, p.q,
        method=f"analytic-{variant}",
        error=max(errors) if errors else 0.0,
        flags=flags,
    )
    logger.info(f"🧮 analytic ({variant}, {mitigation.scheme.value}): "
                f"c_I={report.c_I:.4f} c_O={report.c_O:.4f} c_u={report.c_u:.4f}")
    return report


__all__ = [
    'VARIANTS',
    'access_coverage',
    'access_coverage_with_IR',
    'backhaul_coverage',
    'backhaul_coverage_by_load',
    'rate_coverage',
]
