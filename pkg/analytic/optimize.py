"""
IBFD fractions: balanced coverage, optimal user coverage and the analytic balance root.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

from scipy import optimize

from analytic.closed_form import check_rayleigh, constant_A, hyper_term
from analytic.coverage import rate_coverage
from network.model import DerivedModel, derive_model
from network.params import NetworkParams, with_overrides
from numerics.quadrature import QuadratureSettings
from utils.errors import require

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fraction:
    """A closed-form IBFD fraction, clamped to [0, 1]"""
    value: float
    raw: float
    clamped: bool

    @classmethod
    def from_raw(cls, raw: float, name: str) -> 'Fraction':
        value = min(1.0, max(0.0, raw))
        clamped = value != raw
        if clamped:
            logger.warning(f"⚠️ {name} = {raw:.6f} outside [0, 1], clamped to {value:.1f}")
        return cls(value=value, raw=raw, clamped=clamped)


def _terms(d: DerivedModel, p: NetworkParams, approx: bool):
    """(c, g_I, g_O) for the approximate or exact user-coverage model"""
    served = d.served_intensity
    if approx:
        return 2.0 * served / (p.beta - 2.0), d.gamma_aI, d.gamma_aO
    check_rayleigh(p, "exact IBFD fraction")
    return served, hyper_term(d.gamma_aI, p.beta), hyper_term(d.gamma_aO, p.beta)


def q_balance(d: DerivedModel, p: NetworkParams, approx: bool = False) -> Fraction:
    """
    Fraction equalising IBFD and OBFD access coverage under perfect backhaul

    exact:  (H_O - A / L) / (H_O + H_I),  H = 2F1[1, -2/beta; 1-2/beta; -gamma] - 1
    approx: (gamma_aO - A (beta-2) / (2 L)) / (gamma_aI + gamma_aO)
    with L = lam_c min(lam_s/lam_c, S_max).
    """
    A = constant_A(d, p)
    served = d.served_intensity
    if approx:
        raw = (d.gamma_aO - A * (p.beta - 2.0) / (2.0 * served)) / (d.gamma_aI + d.gamma_aO)
    else:
        check_rayleigh(p, "exact balanced fraction")
        h_I = hyper_term(d.gamma_aI, p.beta)
        h_O = hyper_term(d.gamma_aO, p.beta)
        raw = (h_O - A / served) / (h_O + h_I)
    return Fraction.from_raw(raw, "q_balance")


def q_star(d: DerivedModel, p: NetworkParams, approx: bool = False) -> Fraction:
    """
    Fraction maximising c_u(q) = q C_I(q) + (1-q) C_O(q) under perfect backhaul

    Negative root of the stationarity condition
        q* = [(A+ls)(c^2 g_O^2 + e) - (c(A + c g_I) g_O + e) sqrt(ls (A+ls))]
             / [c^2 (g_O^2 (A+ls) - g_I^2 ls)],   e = c (g_I + g_O) ls.
    When the denominator vanishes the equivalent rationalised root
        [sqrt(A+ls)(c g_O + ls) - sqrt(ls)(A+ls)] / [c (sqrt(A+ls) g_O + sqrt(ls) g_I)]
    is used.
    """
    c, g_I, g_O = _terms(d, p, approx)
    A = constant_A(d, p)
    ls = d.lambda_s
    discriminant = ls * (A + ls)
    assert discriminant >= 0.0, "lambda_s (A + lambda_s) must be non-negative"
    root = math.sqrt(discriminant)

    e = c * (g_I + g_O) * ls
    denominator = c ** 2 * (g_O ** 2 * (A + ls) - g_I ** 2 * ls)
    scale = c ** 2 * (g_O ** 2 * (A + ls) + g_I ** 2 * ls)
    if abs(denominator) > 1e-9 * scale:
        numerator = (A + ls) * (c ** 2 * g_O ** 2 + e) - (c * (A + c * g_I) * g_O + e) * root
        raw = numerator / denominator
    else:
        raw = ((math.sqrt(A + ls) * (c * g_O + ls) - math.sqrt(ls) * (A + ls))
               / (c * (math.sqrt(A + ls) * g_O + math.sqrt(ls) * g_I)))
    return Fraction.from_raw(raw, "q_star")


def balance_root(p: NetworkParams, settings: Optional[QuadratureSettings] = None,
                 variant: str = 'exact', perfect_backhaul: bool = False,
                 xtol: float = 1e-4) -> Optional[float]:
    """
    Root in [0, 1] of c_I(q) - c_O(q) from the full analytic model

    Returns:
        The root, or None when c_I - c_O keeps one sign on [0, 1]
    """
    def gap(q: float) -> float:
        pq = with_overrides(p, q=q)
        report = rate_coverage(derive_model(pq), pq, settings=settings,
                               variant=variant, perfect_backhaul=perfect_backhaul)
        return report.c_I - report.c_O

    low, high = gap(0.0), gap(1.0)
    if low == 0.0:
        return 0.0
    if high == 0.0:
        return 1.0
    if low * high > 0.0:
        logger.warning(f"⚠️ c_I - c_O has no sign change on [0, 1] ({low:+.4f}, {high:+.4f})")
        return None
    root = optimize.brentq(gap, 0.0, 1.0, xtol=xtol)
    require(0.0 <= root <= 1.0, f"balance root {root} escaped [0, 1]")
    logger.info(f"📊 balance root q = {root:.4f}")
    return float(root)


__all__ = [
    'Fraction',
    'q_balance',
    'q_star',
    'balance_root',
]
