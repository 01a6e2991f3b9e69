"""
Special functions used by the interference Laplace transforms.

Real arguments follow the textbook recipes (Pfaff map then power series,
Gauss summation at z = 1, gamma reflection for negative parameters).
Complex arguments only occur on the Gil-Pelaez path, where t = -jw makes
the hypergeometric and incomplete-gamma arguments purely imaginary.
"""

import logging
import math
from typing import Union

import numpy as np
from scipy import special

from utils.errors import ConvergenceError, require

logger = logging.getLogger(__name__)

Number = Union[float, complex, np.ndarray]

SERIES_RTOL = 1e-13
SERIES_MAX_TERMS = 20000
# |w| above this switches the Pfaff-mapped series to the 1-w connection formula
CONNECTION_RADIUS = 0.8
# |x| below this uses the lower-gamma series, above it the continued fraction
_CF_SWITCH = 3.0
_CF_MAX_ITER = 2000
_FPMIN = 1e-300
# c-a-b closer than this (relative) to an integer takes the logarithmic branch
INTEGER_TOL = 1e-9


def _is_nonpositive_int(value: float) -> bool:
    return value <= 0 and float(value).is_integer()


def _near_integer(value: float, *scale: float) -> bool:
    """Integer up to the rounding left by parameter arithmetic (c - a - b)"""
    tolerance = INTEGER_TOL * max([1.0] + [abs(s) for s in scale])
    return abs(value - round(value)) < tolerance


def _unwrap(result: np.ndarray, scalar: bool) -> Number:
    if not scalar:
        return result
    value = result.reshape(-1)[0]
    if np.iscomplexobj(result):
        return complex(value)
    return float(value)


def hyp2f1_series(a: float, b: float, c: float, z: Number,
                  rtol: float = SERIES_RTOL, max_terms: int = SERIES_MAX_TERMS) -> Number:
    """
    Raw Gauss series sum_n (a)_n (b)_n / ((c)_n n!) z^n for |z| < 1

    Args:
        a, b, c: Real parameters, c not a non-positive integer
        z: Real or complex argument(s) inside the unit disc
        rtol: Stop when the geometric tail bound drops below rtol * |sum|
        max_terms: Iteration cap

    Returns:
        Series value, same shape as z
    """
    require(not _is_nonpositive_int(c), f"2F1 undefined for c={c}")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z))
    dtype = complex if np.iscomplexobj(z) else float
    z = z.astype(dtype)
    radius = np.abs(z)
    require(bool(np.all(radius < 1.0)), "series argument must satisfy |z| < 1")

    term = np.ones_like(z)
    total = np.ones_like(z)
    shrink = radius / (1.0 - radius)
    for n in range(max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        total = total + term
        tail = np.abs(term) * shrink
        if np.all(tail <= rtol * np.abs(total) + 1e-300):
            return _unwrap(total, scalar)

    achieved = float(np.max(np.abs(term) * shrink / np.maximum(np.abs(total), 1e-300)))
    raise ConvergenceError(
        f"2F1 series did not converge in {max_terms} terms (a={a}, b={b}, c={c})",
        achieved_error=achieved,
        partial_result=None,
    )


def _gauss_summation(a: float, b: float, c: float) -> float:
    """2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b))"""
    polynomial = _is_nonpositive_int(a) or _is_nonpositive_int(b)
    require(c - a - b > 0 or polynomial,
            f"2F1 diverges at z=1 when c-a-b={c - a - b} <= 0")
    if polynomial and c - a - b <= 0:
        # Chu-Vandermonde: 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
        if _is_nonpositive_int(a):
            n, other = int(-a), b
        else:
            n, other = int(-b), a
        return float(special.poch(c - other, n) / special.poch(c, n))
    return float(special.gamma(c) * special.gamma(c - a - b)
                 * special.rgamma(c - a) * special.rgamma(c - b))


def _connection(a: float, b: float, c: float, w: np.ndarray, rtol: float) -> np.ndarray:
    """Expansion of 2F1(a, b; c; w) around w = 1, for c-a-b not an integer"""
    s = c - a - b
    one_minus = 1.0 - w
    first = (special.gamma(c) * special.gamma(s) * special.rgamma(c - a) * special.rgamma(c - b))
    second = (special.gamma(c) * special.gamma(-s) * special.rgamma(a) * special.rgamma(b))
    result = np.zeros_like(w)
    if first != 0.0:
        result = result + first * hyp2f1_series(a, b, 1.0 - s, one_minus, rtol=rtol)
    if second != 0.0:
        result = result + second * one_minus ** s * hyp2f1_series(c - a, c - b, 1.0 + s, one_minus, rtol=rtol)
    return result


def _evaluate_disc(a: float, b: float, c: float, w: np.ndarray, rtol: float) -> np.ndarray:
    """2F1 on the unit disc: series near 0, connection formula near 1"""
    out = np.empty_like(w)
    near = np.abs(w) <= CONNECTION_RADIUS
    if np.any(near):
        out[near] = hyp2f1_series(a, b, c, w[near], rtol=rtol)
    far = ~near
    if np.any(far):
        s = c - a - b
        if _near_integer(s, a, b, c):
            # connection formula is singular here; scipy has the logarithmic case
            logger.debug(f"2F1 integer c-a-b={s:.3g}, delegating {int(far.sum())} points to scipy")
            out[far] = special.hyp2f1(a, b, c, w[far])
        else:
            out[far] = _connection(a, b, c, w[far], rtol)
    return out


def gauss_2f1(a: float, b: float, c: float, z: Number, rtol: float = SERIES_RTOL) -> Number:
    """
    Gauss hypergeometric function 2F1(a, b; c; z)

    Arguments with Re z <= 0 go through the Pfaff identity
    2F1(a, b; c; z) = (1-z)^(-b) 2F1(c-a, b; c; z/(z-1)) before summation.
    z = 1 uses Gauss's summation theorem.

    Args:
        a, b, c: Real parameters
        z: Real z <= 1, or complex z with Re z <= 0
        rtol: Relative tolerance of the underlying series

    Returns:
        2F1 value(s), same shape as z
    """
    require(not _is_nonpositive_int(c), f"2F1 undefined for c={c} (non-positive integer)")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z))
    is_complex = np.iscomplexobj(z)

    if not is_complex:
        z = z.astype(float)
        require(bool(np.all(z <= 1.0)), "2F1 real argument must satisfy z <= 1")
    else:
        z = z.astype(complex)

    out = np.ones_like(z)
    at_one = (z == 1.0)
    if np.any(at_one):
        out[at_one] = _gauss_summation(a, b, c)

    pfaff = (z.real <= 0.0) & (z != 0.0) & ~at_one
    if np.any(pfaff):
        zp = z[pfaff]
        w = zp / (zp - 1.0)
        out[pfaff] = (1.0 - zp) ** (-b) * _evaluate_disc(c - a, b, c, w, rtol)

    direct = ~pfaff & ~at_one & (z != 0.0)
    if np.any(direct):
        zd = z[direct]
        if is_complex and np.any(np.abs(zd) > CONNECTION_RADIUS):
            out[direct] = special.hyp2f1(a, b, c, zd)
        else:
            out[direct] = _evaluate_disc(a, b, c, zd, rtol)

    return _unwrap(out, scalar)


def _gamma_reflected(x: float) -> float:
    """Gamma function with negative non-integers routed through reflection"""
    require(not _is_nonpositive_int(x), f"Gamma has a pole at {x}")
    if x > 0:
        return float(special.gamma(x))
    return math.pi / (math.sin(math.pi * x) * float(special.gamma(1.0 - x)))


def beta_fn(a: float, b: float) -> float:
    """
    Beta function B(a, b) = G(a) G(b) / G(a+b)

    Negative non-integer parameters are allowed (the SBS-to-SBS interference
    transform needs b = -2/beta); non-positive integers are poles.
    """
    for name, value in (('a', a), ('b', b), ('a+b', a + b)):
        require(not _is_nonpositive_int(value), f"Beta function pole: {name}={value}")
    return _gamma_reflected(a) * _gamma_reflected(b) / _gamma_reflected(a + b)


def lower_inc_gamma(a: float, x: Number) -> Number:
    """Lower incomplete gamma G_l(a; x) = int_0^x t^(a-1) e^-t dt"""
    require(a > 0, f"lower incomplete gamma needs a > 0, got {a}")
    x_arr = np.asarray(x, dtype=float)
    require(bool(np.all(x_arr >= 0)), "lower incomplete gamma needs x >= 0")
    value = special.gammainc(a, x_arr) * special.gamma(a)
    return float(value) if np.ndim(value) == 0 else value


def _lower_series_complex(s: float, x: np.ndarray) -> np.ndarray:
    """x^s e^-x sum x^n / (s (s+1) ... (s+n)), the NR gser recipe"""
    term = np.full_like(x, 1.0 / s)
    total = term.copy()
    ap = s
    for _ in range(_CF_MAX_ITER):
        ap += 1.0
        term = term * x / ap
        total = total + term
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            return total * np.exp(-x + s * np.log(x))
    raise ConvergenceError("lower incomplete gamma series did not converge",
                           achieved_error=float(np.max(np.abs(term))))


def _upper_fraction_complex(s: float, x: np.ndarray) -> np.ndarray:
    """Legendre continued fraction for G_u(s; x), modified Lentz (NR gcf)"""
    b = x + 1.0 - s
    c = np.full_like(x, 1.0 / _FPMIN)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for i in range(1, _CF_MAX_ITER + 1):
        an = -i * (i - s)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = b + an / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < SERIES_RTOL
        if np.all(done):
            return np.exp(-x + s * np.log(x)) * h
    raise ConvergenceError("incomplete gamma continued fraction did not converge",
                           achieved_error=float(np.max(np.abs(delta - 1.0))))


def _upper_base_complex(s: float, x: np.ndarray) -> np.ndarray:
    """G_u(s; x) for 0 < s <= 1 and complex x off the negative real axis"""
    out = np.empty_like(x)
    small = np.abs(x) < _CF_SWITCH
    if np.any(small):
        out[small] = special.gamma(s) - _lower_series_complex(s, x[small])
    if np.any(~small):
        out[~small] = _upper_fraction_complex(s, x[~small])
    return out


def upper_inc_gamma(a: float, x: Number) -> Number:
    """
    Upper incomplete gamma G_u(a; x) = int_x^inf t^(a-1) e^-t dt

    Negative a is reached from a base value in (0, 1] (or from E1 for
    integer a) with G_u(a; x) = (G_u(a+1; x) - x^a e^-x) / a.

    Args:
        a: Real order, may be negative
        x: x >= 0 (x > 0 when a <= 0), or complex x off the negative real axis

    Returns:
        G_u(a; x), same shape as x
    """
    scalar = np.ndim(x) == 0
    x_arr = np.atleast_1d(np.asarray(x))
    is_complex = np.iscomplexobj(x_arr)

    if not is_complex:
        x_arr = x_arr.astype(float)
        require(bool(np.all(x_arr >= 0)), "upper incomplete gamma needs x >= 0")
        # positive order: regularised scipy value
        if a > 0:
            return _unwrap(special.gammaincc(a, x_arr) * special.gamma(a), scalar)
        require(bool(np.all(x_arr > 0)), f"G_u({a}; 0) diverges for a <= 0")
    else:
        x_arr = x_arr.astype(complex)
        require(bool(np.all(x_arr != 0)), "upper incomplete gamma needs x != 0 for complex x")
        if a > 1:
            # G_u(a; x) = (a-1) G_u(a-1; x) + x^(a-1) e^-x
            lower = upper_inc_gamma(a - 1.0, x_arr)
            return _unwrap((a - 1.0) * lower + np.exp((a - 1.0) * np.log(x_arr) - x_arr), scalar)

    # base order s in (0, 1], or s = 0 through E1
    if a == 1.0:
        return _unwrap(np.exp(-x_arr), scalar)
    if float(a).is_integer():
        s = 0.0
        value = special.exp1(x_arr)
    elif is_complex:
        s = a + math.ceil(-a) if a <= 0 else a
        value = _upper_base_complex(s, x_arr)
    else:
        s = a + math.ceil(-a)
        value = special.gammaincc(s, x_arr) * special.gamma(s)

    # step down from s to a
    log_x = np.log(x_arr)
    while s > a + 0.5:
        s -= 1.0
        value = (value - np.exp(s * log_x - x_arr)) / s
    return _unwrap(value, scalar)


__all__ = [
    'hyp2f1_series',
    'gauss_2f1',
    'beta_fn',
    'lower_inc_gamma',
    'upper_inc_gamma',
]
