"""
Adaptive quadrature and Gil-Pelaez CDF inversion.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np

import config
from utils.errors import ConvergenceError, DomainError, require

logger = logging.getLogger(__name__)

# phi(w) returns the Laplace transform L(s) of the variable at s = -jw
CharacteristicFunction = Callable[..., np.ndarray]

# |x| within this factor of each other share one dyadic panel ladder
GROUP_SPAN = math.sqrt(10.0)
# each further term of a tail closure must shrink the series by this factor
CLOSURE_RATIO = 0.05
# a power-law tail below this decay exponent is not trusted
MIN_TAIL_EXPONENT = 0.05
# finite-difference stencil of the integration-by-parts closure, in steps of h
_STENCIL = np.arange(-2.0, 3.0)


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and caps shared by every integral in the engine"""
    rtol: float = 1e-6
    atol: float = 1e-9
    max_subdivisions: int = 2000
    order: int = 15
    tail_panels: int = 3
    max_panels: int = 160

    def __post_init__(self):
        require(self.rtol > 0 and self.atol > 0, "quadrature tolerances must be positive")
        require(self.max_subdivisions >= 1, "max_subdivisions must be >= 1")
        require(self.order >= 2, "Gauss-Legendre order must be >= 2")
        require(self.tail_panels >= 1 and self.max_panels >= 1, "panel counts must be >= 1")

    @classmethod
    def from_config(cls, **overrides) -> 'QuadratureSettings':
        values = dict(config.QUADRATURE_SETTINGS)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@lru_cache(maxsize=16)
def _legendre_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def integrate_adaptive(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                       settings: Optional[QuadratureSettings] = None) -> Tuple[np.ndarray, float]:
    """
    Adaptive Gauss-Legendre quadrature of a vectorised integrand

    Each interval is integrated with an n-point and a 2n-point rule; the
    difference is the error estimate. Intervals failing
    max(atol * share, rtol * |I|) are bisected.

    Args:
        f: Maps a 1-D node array of length m to an array of shape (..., m)
        a, b: Finite limits
        settings: Quadrature settings, defaults from config

    Returns:
        (value, error estimate); value has the leading shape of f's output
    """
    settings = settings or QuadratureSettings.from_config()
    if a == b:
        probe = np.asarray(f(np.array([a])))
        return np.zeros(probe.shape[:-1]), 0.0

    x_lo, w_lo = _legendre_rule(settings.order)
    x_hi, w_hi = _legendre_rule(2 * settings.order)
    n_lo = len(x_lo)
    length = b - a

    total = None
    error = 0.0
    stack = [(a, b)]
    subdivisions = 0

    while stack:
        lo, hi = stack.pop()
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        nodes = np.concatenate([mid + half * x_lo, mid + half * x_hi])
        values = np.asarray(f(nodes))
        coarse = half * (values[..., :n_lo] @ w_lo)
        fine = half * (values[..., n_lo:] @ w_hi)
        local_error = float(np.max(np.abs(fine - coarse)))
        allowed = max(settings.atol * abs(hi - lo) / abs(length),
                      settings.rtol * float(np.max(np.abs(fine))))

        if local_error <= allowed or half <= 1e-15 * max(abs(mid), 1.0):
            total = fine if total is None else total + fine
            error += local_error
            continue

        subdivisions += 1
        if subdivisions > settings.max_subdivisions:
            partial = fine if total is None else total + fine
            raise ConvergenceError(
                f"adaptive quadrature on [{a:.4g}, {b:.4g}] hit {settings.max_subdivisions} subdivisions",
                achieved_error=error + local_error,
                partial_result=float(np.max(np.abs(partial))),
            )
        stack.append((mid, hi))
        stack.append((lo, mid))

    return total, error


def _power_tail(probe: np.ndarray, settings: QuadratureSettings) -> Optional[Tuple[np.ndarray, float]]:
    """
    Closed-form tail int_lo^inf Im[phi(w)] / w dw when phi(w) ~ C w^-p (x = 0 rows)

    probe holds phi at (lo, sqrt(2)*lo, 2*lo) per row. The law is only
    accepted once |phi| has clearly decayed and both later samples fit it.
    """
    p0, p_mid, p1 = probe.T
    if np.any(np.abs(p0) == 0.0) or np.any(np.abs(p1) == 0.0):
        return None
    p = np.log2(np.abs(p0) / np.abs(p1))
    if np.any(p < MIN_TAIL_EXPONENT) or np.any(np.abs(p0) > 1.0 - CLOSURE_RATIO):
        return None
    allowed = np.maximum(settings.rtol * np.abs(p0), settings.atol)
    if np.any(np.abs(p0 * 2.0 ** (-0.5 * p) - p_mid) > allowed):
        return None
    if np.any(np.abs(p1 - p0 * 2.0 ** (-p)) > allowed):
        return None
    return p0.imag / p, 0.0


def _parts_tail(stencil: np.ndarray, lo: float, step: float, x: np.ndarray,
                settings: QuadratureSettings) -> Optional[Tuple[np.ndarray, float]]:
    """
    Integration-by-parts tail int_lo^inf Im[phi(w) e^{-jwx}] / w dw (x != 0 rows)

    With g = phi / w the tail is e^{-j lo x} sum_k g^(k)(lo) / (jx)^(k+1).
    Four terms are kept, derivatives come from a five-point stencil of
    width `step`. The closure is refused until lo |x| >= 1 / CLOSURE_RATIO,
    the series shrinks by CLOSURE_RATIO and the last term is below atol.
    """
    if float(np.min(np.abs(x))) * lo < 1.0 / CLOSURE_RATIO:
        return None
    g = stencil / (lo + step * _STENCIL)[None, :]
    gm2, gm1, g0, gp1, gp2 = g.T
    d1 = (gm2 - 8.0 * gm1 + 8.0 * gp1 - gp2) / (12.0 * step)
    d2 = (-gm2 + 16.0 * gm1 - 30.0 * g0 + 16.0 * gp1 - gp2) / (12.0 * step ** 2)
    d3 = (-gm2 + 2.0 * gm1 - 2.0 * gp1 + gp2) / (2.0 * step ** 3)

    ax = np.abs(x)
    t0, t1, t2, t3 = np.abs(g0) / ax, np.abs(d1) / ax ** 2, np.abs(d2) / ax ** 3, np.abs(d3) / ax ** 4
    settled = (t3 <= settings.atol) & (t1 + t2 + t3 <= CLOSURE_RATIO * t0)
    negligible = np.abs(stencil[:, 2]) < settings.atol
    if not np.all(settled | negligible):
        return None

    jx = 1j * x
    series = np.exp(-jx * lo) * (g0 / jx + d1 / jx ** 2 + d2 / jx ** 3 + d3 / jx ** 4)
    return np.imag(series), float(np.max(t3))


def _invert_group(phi: CharacteristicFunction, rows: np.ndarray, x: np.ndarray, base: float,
                  settings: QuadratureSettings, batched: bool) -> Tuple[np.ndarray, float]:
    """Gil-Pelaez integral for rows whose |x| (or scale) share one decade band"""

    def values_at(w: np.ndarray) -> np.ndarray:
        out = phi(w, rows) if batched else phi(w)
        return np.broadcast_to(np.asarray(out, dtype=complex), (len(rows), len(w)))

    def integrand(w: np.ndarray) -> np.ndarray:
        return np.imag(values_at(w) * np.exp(-1j * np.outer(x, w))) / w[None, :]

    oscillating = bool(x[0] != 0.0)
    step = 0.25 / float(np.max(np.abs(x))) if oscillating else 0.0
    total = np.zeros_like(x)
    error = 0.0
    panels = 0

    # upward
    lo = base
    quiet = 0
    while quiet < settings.tail_panels:
        hi = 2.0 * lo
        if oscillating:
            samples = values_at(lo + step * _STENCIL)
        else:
            samples = values_at(np.array([lo, math.sqrt(2.0) * lo, hi]))
        if float(np.max(np.abs(samples))) < settings.atol:
            break
        closure = _parts_tail(samples, lo, step, x, settings) if oscillating \
            else _power_tail(samples, settings)
        if closure is not None:
            tail, tail_error = closure
            total += tail
            error += tail_error
            break
        value, panel_error = integrate_adaptive(integrand, lo, hi, settings)
        total += value
        error += panel_error
        quiet = quiet + 1 if float(np.max(np.abs(value))) < settings.atol else 0
        lo = hi
        panels += 1
        if panels > settings.max_panels:
            raise ConvergenceError("Gil-Pelaez upper tail did not settle",
                                   achieved_error=error,
                                   partial_result=float(np.max(0.5 - total / math.pi)))

    # downward
    hi = base
    quiet = 0
    while quiet < settings.tail_panels:
        lo = 0.5 * hi
        value, panel_error = integrate_adaptive(integrand, lo, hi, settings)
        total += value
        error += panel_error
        quiet = quiet + 1 if float(np.max(np.abs(value))) < settings.atol else 0
        hi = lo
        panels += 1
        if panels > settings.max_panels:
            raise ConvergenceError("Gil-Pelaez lower range did not settle",
                                   achieved_error=error,
                                   partial_result=float(np.max(0.5 - total / math.pi)))

    return np.clip(0.5 - total / math.pi, 0.0, 1.0), error / math.pi


def gil_pelaez_cdf(phi: CharacteristicFunction, x: Union[float, np.ndarray],
                   settings: Optional[QuadratureSettings] = None,
                   support: str = "nonnegative", scale: Union[None, float, np.ndarray] = None,
                   full_output: bool = False, batched: bool = False):
    """
    F(x) = 1/2 - (1/pi) int_0^inf Im[phi(w) e^{-jwx}] / w dw

    Points are grouped by the half-decade of |x| (of `scale` where x = 0)
    and each group gets its own dyadic panel ladder starting at 1/max|x|.
    Upward panels stop when |phi| drops below atol, when a tail closure is
    accepted (integration by parts for x != 0, a decayed power law for
    x = 0), or after `tail_panels` quiet panels; downward panels stop on
    the quiet-panel rule.

    Args:
        phi: w -> L(-jw) on a 1-D array, or with batched=True
             (w, rows) -> array (len(rows), len(w)), one law per point
        x: Evaluation point(s)
        settings: Quadrature settings
        support: "nonnegative" short-circuits x < 0 to 0; "real" does not
        scale: Oscillation scale of the x = 0 points (scalar or per point)
        full_output: Also return the largest group error estimate
        batched: phi carries one characteristic function per point of x

    Returns:
        CDF value(s) clamped to [0, 1], same shape as x
    """
    require(support in ("nonnegative", "real"), f"unknown support '{support}'", exc=DomainError)
    settings = settings or QuadratureSettings.from_config()
    scalar = np.ndim(x) == 0
    xs = np.asarray(x, dtype=float)
    shape = xs.shape
    xs = xs.reshape(-1)
    result = np.zeros_like(xs)
    error = 0.0

    active = np.ones(xs.shape, dtype=bool) if support == "real" else xs >= 0.0
    zero = xs == 0.0
    reference = np.abs(xs)
    if scale is not None:
        scales = np.broadcast_to(np.asarray(scale, dtype=float), shape).reshape(-1)
        require(bool(np.all(scales[active & zero] > 0.0)), "oscillation scale must be positive")
        reference = np.where(zero, scales, reference)
    reference = np.where(reference > 0.0, reference, 1.0)

    band = np.floor(np.log(reference) / math.log(GROUP_SPAN)).astype(int)
    keys = 2 * band + zero
    for key in np.unique(keys[active]):
        rows = np.flatnonzero(active & (keys == key))
        base = 1.0 / float(np.max(reference[rows]))
        values, group_error = _invert_group(phi, rows, xs[rows], base, settings, batched)
        result[rows] = values
        error = max(error, group_error)

    result = result.reshape(shape)
    value = float(result) if scalar else result
    if full_output:
        return value, error
    return value


__all__ = [
    'CharacteristicFunction',
    'QuadratureSettings',
    'integrate_adaptive',
    'gil_pelaez_cdf',
]
