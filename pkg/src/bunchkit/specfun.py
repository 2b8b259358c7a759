"""Log-gamma, log-beta, and the regularized incomplete beta function with its
inverse.

Implementations follow the classical recipes: a 9-term Lanczos series (g = 7)
for log-gamma, and the even/odd continued fraction evaluated with the modified
Lentz algorithm for the incomplete beta, switching to the symmetric tail at
x > (alpha + 1) / (alpha + beta + 2) so the fraction always converges fast.
The inverse runs a bisection-seeded Newton iteration on the CDF.

Accuracy: log_gamma is good to ~1e-13 relative on [0.5, 1e6] away from its
zeros at 1 and 2 (which return exactly 0.0); reg_inc_beta is good to ~1e-12
absolute for shapes up to 1e4.  Shapes above 1e6 are rejected.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DomainError, MaxDepthExceeded

MAX_SHAPE = 1e6

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Lanczos approximation, g = 7, 9 coefficients
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


class ShapePair(NamedTuple):
    """Beta shape parameters (alpha, beta), both in (0, 1e6]."""

    alpha: float
    beta: float


def _check_shape(v: float, name: str) -> float:
    v = float(v)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"shape {name} must be finite and > 0, got {v}")
    if v > MAX_SHAPE:
        raise DomainError(f"shape {name}={v} exceeds the supported cap {MAX_SHAPE:g}")
    return v


def _as_shapes(p) -> ShapePair:
    a, b = p
    return ShapePair(_check_shape(a, "alpha"), _check_shape(b, "beta"))


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        # reflection; sin(pi*x) > 0 on (0, 0.5)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def log_beta(p) -> float:
    """log B(alpha, beta) = log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta)."""
    a, b = _as_shapes(p)
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b)


def _beta_cf(a: float, b: float, x: float) -> float:
    # continued fraction for the incomplete beta (modified Lentz)
    FPMIN = 1e-300
    EPS = 3e-16
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise MaxDepthExceeded(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )


def reg_inc_beta(x: float, p) -> float:
    """Regularized incomplete beta function I_x(alpha, beta) on [0, 1]."""
    a, b = _as_shapes(p)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reg_inc_beta requires x in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = a * math.log(x) + b * math.log1p(-x) - log_beta((a, b))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        r = front * _beta_cf(a, b, x) / a
    else:
        r = 1.0 - front * _beta_cf(b, a, 1.0 - x) / b
    # continued-fraction rounding can overshoot the closed interval by an ulp
    if r < 0.0:
        return 0.0
    if r > 1.0:
        return 1.0
    return r


def inv_reg_inc_beta(u: float, p) -> float:
    """Inverse of reg_inc_beta in x: the u-quantile of a Beta(alpha, beta).

    Bisection localizes the root to a loose bracket, then bracket-clamped
    Newton steps polish it; whenever the density is non-finite, zero, or the
    Newton step leaves the bracket, the step falls back to bisection.
    """
    shapes = _as_shapes(p)
    u = float(u)
    if not 0.0 <= u <= 1.0 or not math.isfinite(u):
        raise DomainError(f"inv_reg_inc_beta requires u in [0, 1], got {u}")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 1.0
    a, b = shapes
    ln_b = log_beta(shapes)

    lo, hi = 0.0, 1.0
    for _ in range(18):
        mid = 0.5 * (lo + hi)
        if reg_inc_beta(mid, shapes) < u:
            lo = mid
        else:
            hi = mid

    x = 0.5 * (lo + hi)
    for _ in range(60):
        fx = reg_inc_beta(x, shapes) - u
        if fx > 0.0:
            hi = x
        elif fx < 0.0:
            lo = x
        else:
            return x
        if hi - lo <= 4.0 * 2.220446049250313e-16 * max(hi, 1e-300):
            return 0.5 * (lo + hi)
        try:
            pdf = math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - ln_b)
        except (OverflowError, ValueError):
            pdf = math.inf
        if math.isfinite(pdf) and pdf > 0.0:
            xn = x - fx / pdf
            if not lo < xn < hi:
                xn = 0.5 * (lo + hi)
        else:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-16 * max(abs(x), 1e-300):
            return xn
        x = xn
    return x
