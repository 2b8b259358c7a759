"""Beta and GB2 distribution primitives.

Two parameterizations appear throughout:

* the restricted Beta family Beta(n*a, m*a): n and m are held fixed and only
  a varies, so the mean n/(n+m) is constant in a while the variance
  n*m / ((n+m)^2 (n*a + m*a + 1)) strictly decreases in a;
* GB2(b, gamma, alpha, beta) on x > 0, defined through the Beta kernel by
  (x/b)^gamma / (1 + (x/b)^gamma) ~ Beta(alpha, beta).

The density ratio of two restricted members with a2 > a1 is
K * x^(-p) * (1-x)^(-q) with p = n*(a2-a1), q = m*(a2-a1) and
K = B(n*a2, m*a2) / B(n*a1, m*a1); its second derivative has the closed form
used by ratio_second_derivative, which is strictly positive on (0, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, MismatchedFamily
from .specfun import ShapePair, _as_shapes, inv_reg_inc_beta, log_beta, reg_inc_beta


def _positive(v: float, name: str) -> float:
    v = float(v)
    if not math.isfinite(v) or v <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {v}")
    return v


@dataclass(frozen=True)
class RestrictedBetaParams:
    """Member Beta(n*a, m*a) of the restricted family; n, m fixed, a varies."""

    a: float
    n: float
    m: float

    def __post_init__(self):
        _positive(self.a, "a")
        _positive(self.n, "n")
        _positive(self.m, "m")

    @property
    def shapes(self) -> ShapePair:
        return ShapePair(self.n * self.a, self.m * self.a)


@dataclass(frozen=True)
class GB2Params:
    """GB2 parameters: scale b, Beta-kernel exponent gamma, shapes alpha, beta."""

    scale_b: float
    gamma: float
    alpha: float
    beta: float

    def __post_init__(self):
        _positive(self.scale_b, "scale_b")
        _positive(self.gamma, "gamma")
        _positive(self.alpha, "alpha")
        _positive(self.beta, "beta")

    @property
    def has_mean(self) -> bool:
        return self.beta * self.gamma > 1.0


@dataclass(frozen=True)
class XiA:
    """(xi, a) coordinates for Beta shapes: alpha = a*xi, beta = a*(1-xi)."""

    xi: float
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and 0.0 < self.xi < 1.0):
            raise DomainError(f"xi must lie in (0, 1), got {self.xi}")
        _positive(self.a, "a")

    @property
    def shapes(self) -> ShapePair:
        return ShapePair(self.a * self.xi, self.a * (1.0 - self.xi))


class Moments(NamedTuple):
    mean: float
    variance: float


def beta_pdf(x: float, p) -> float:
    """Beta density x^(alpha-1) (1-x)^(beta-1) / B(alpha, beta).

    At x = 0 or 1 the one-sided limit is returned when it exists;
    DomainError when the corresponding shape is < 1 (density unbounded)
    or when x lies outside [0, 1].
    """
    a, b = _as_shapes(p)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"beta_pdf requires x in [0, 1], got {x}")
    if x == 0.0:
        if a < 1.0:
            raise DomainError(f"density unbounded at x=0 for alpha={a} < 1")
        if a == 1.0:
            return b  # 1 / B(1, beta)
        return 0.0
    if x == 1.0:
        if b < 1.0:
            raise DomainError(f"density unbounded at x=1 for beta={b} < 1")
        if b == 1.0:
            return a
        return 0.0
    return math.exp((a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - log_beta((a, b)))


def restricted_cdf(x: float, p: RestrictedBetaParams) -> float:
    """CDF of the restricted family member: I_x(n*a, m*a)."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"restricted_cdf requires x in [0, 1], got {x}")
    return reg_inc_beta(x, p.shapes)


def restricted_moments(p: RestrictedBetaParams) -> Moments:
    """(mean, variance) of Beta(n*a, m*a); the mean does not depend on a."""
    s = p.n + p.m
    mean = p.n / s
    variance = p.n * p.m / (s * s * (p.n * p.a + p.m * p.a + 1.0))
    return Moments(mean, variance)


def _check_same_family(p1: RestrictedBetaParams, p2: RestrictedBetaParams) -> None:
    if p1.n != p2.n or p1.m != p2.m:
        raise MismatchedFamily(
            f"(n, m) must match: ({p1.n}, {p1.m}) vs ({p2.n}, {p2.m})"
        )


def density_ratio(
    x: float,
    p1: RestrictedBetaParams,
    p2: RestrictedBetaParams,
    cap: float = 1e300,
) -> float:
    """Density ratio pdf_{a1}(x) / pdf_{a2}(x) within one restricted family.

    Evaluated in log space as K * x^(-p) * (1-x)^(-q) with
    p = n*(a2-a1), q = m*(a2-a1), K = B(n*a2, m*a2) / B(n*a1, m*a1).
    Values above cap saturate at cap instead of overflowing.
    """
    _check_same_family(p1, p2)
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"density_ratio requires x in (0, 1), got {x}")
    da = p2.a - p1.a
    pw = p1.n * da
    qw = p1.m * da
    ln_k = log_beta(p2.shapes) - log_beta(p1.shapes)
    ln_t = ln_k - pw * math.log(x) - qw * math.log1p(-x)
    if ln_t >= math.log(cap):
        return cap
    return math.exp(ln_t)


def ratio_second_derivative(x: float, p: float, q: float) -> float:
    """Second derivative of t(x) = x^(-p) * (1-x)^(-q) for p, q > 0.

    Closed form:
        t''(x) = [q x^2 + p (1-x)^2 + (q x - p (1-x))^2]
                 / [x^(2+p) * (1-x)^(2+q)]
    which is strictly positive on (0, 1), so t is strictly convex.
    """
    p = _positive(p, "p")
    q = _positive(q, "q")
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"ratio_second_derivative requires x in (0, 1), got {x}")
    one_mx = 1.0 - x
    num = q * x * x + p * one_mx * one_mx + (q * x - p * one_mx) ** 2
    den = math.exp((2.0 + p) * math.log(x) + (2.0 + q) * math.log1p(-x))
    return num / den


def _sigmoid(t: float) -> float:
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def gb2_cdf(x: float, p: GB2Params) -> float:
    """GB2 CDF: I_y(alpha, beta) at y = (x/b)^gamma / (1 + (x/b)^gamma)."""
    x = float(x)
    if x < 0.0 or not math.isfinite(x):
        raise DomainError(f"gb2_cdf requires finite x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    # y = sigmoid(gamma * log(x/b)) is stable for extreme x/b
    y = _sigmoid(p.gamma * (math.log(x) - math.log(p.scale_b)))
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 1.0
    return reg_inc_beta(y, ShapePair(p.alpha, p.beta))


def gb2_quantile(u: float, p: GB2Params) -> float:
    """GB2 quantile: b * (y / (1-y))^(1/gamma) at y = Beta quantile of u."""
    u = float(u)
    if not 0.0 < u < 1.0:
        raise DomainError(f"gb2_quantile requires u in (0, 1), got {u}")
    y = inv_reg_inc_beta(u, ShapePair(p.alpha, p.beta))
    if y <= 0.0 or y >= 1.0:
        raise DomainError(f"Beta quantile saturated at {y} for u={u}; x would be 0 or infinite")
    return p.scale_b * math.exp((math.log(y) - math.log1p(-y)) / p.gamma)


def gb2_mean(p: GB2Params) -> float:
    """E[X] = b * B(alpha + 1/gamma, beta - 1/gamma) / B(alpha, beta).

    Returns nan when the moment condition beta * gamma > 1 fails.
    """
    inv_g = 1.0 / p.gamma
    if p.beta - inv_g <= 0.0:
        return math.nan
    return p.scale_b * math.exp(
        log_beta((p.alpha + inv_g, p.beta - inv_g)) - log_beta((p.alpha, p.beta))
    )
