"""Bunching order diagnostics for the restricted Beta family.

For two members Beta(n*a1, m*a1) and Beta(n*a2, m*a2) with a2 > a1, the CDF
difference J = F_a2 - F_a1 has exactly one interior zero x*: F_a1 > F_a2 on
(0, x*) and F_a1 < F_a2 on (x*, 1).  Mass moves toward x* as a grows, so the
larger-a member is the more bunched one; equivalently the densities cross
exactly twice, once on each side of x*.  This module locates x* and the two
density crossings, verifies the sign pattern on a grid, classifies the
concave/convex order implication of the single sign change, and provides the
supporting scans (x* as a function of n, the value F_a(1/2) as a function of
a) plus a Monte Carlo cross-check based on the identity
Pr{U < V} = F_a(1/2) for independent U ~ Gamma(n*a), V ~ Gamma(m*a).

Monotone transforms commute with the construction: pushing both CDFs through
a strictly monotone map moves the crossing to T(x*) (and reverses the sign
pattern when T decreases), which transform_crossing verifies numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from .distributions import (
    RestrictedBetaParams,
    _check_same_family,
    density_ratio,
    restricted_cdf,
    restricted_moments,
)
from .errors import (
    DegenerateParams,
    DomainError,
    NonMonotoneTransform,
    NoSignChange,
    RatioAboveOne,
)
from .numerics import DEFAULT_XTOL, find_root, minimize_1d
from .specfun import inv_reg_inc_beta

DEFAULT_GRID = 4096
DEFAULT_MC_SEED = 12345

_SCAN_POINTS = 1024


class IcvConclusion(str, Enum):
    A2_DOMINATES_ICV = "a2_dominates_icv"
    A1_DOMINATES_ICV = "a1_dominates_icv"
    INCONCLUSIVE = "inconclusive"


class Direction(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"


class TransformKind(str, Enum):
    AFFINE = "affine"
    POWER = "power"
    LOGARITHM = "logarithm"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class MonotoneTransform:
    """A strictly monotone map with a closed-form inverse.

    kinds and params:
        affine       (c0, c1): T(x) = c0 + c1*x, c1 != 0
        power        (p,):     T(x) = x^p on (0, 1), p > 0
        logarithm    ():       T(x) = ln x
        exponential  ():       T(x) = e^x
    """

    kind: TransformKind
    params: tuple[float, ...] = ()

    def __post_init__(self):
        kind = TransformKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if kind is TransformKind.AFFINE:
            if len(self.params) != 2 or not all(math.isfinite(v) for v in self.params):
                raise NonMonotoneTransform(f"affine needs finite (c0, c1), got {self.params}")
            if self.params[1] == 0.0:
                raise NonMonotoneTransform("affine slope c1 must be nonzero")
        elif kind is TransformKind.POWER:
            if len(self.params) != 1 or not math.isfinite(self.params[0]) or self.params[0] <= 0.0:
                raise NonMonotoneTransform(f"power needs one exponent > 0, got {self.params}")
        else:
            if self.params:
                raise NonMonotoneTransform(f"{kind.value} takes no parameters, got {self.params}")

    @property
    def direction(self) -> Direction:
        if self.kind is TransformKind.AFFINE and self.params[1] < 0.0:
            return Direction.DECREASING
        return Direction.INCREASING

    def __call__(self, x: float) -> float:
        if self.kind is TransformKind.AFFINE:
            return self.params[0] + self.params[1] * x
        if self.kind is TransformKind.POWER:
            return x ** self.params[0]
        if self.kind is TransformKind.LOGARITHM:
            return math.log(x)
        return math.exp(x)

    def inverse(self, z: float) -> float:
        if self.kind is TransformKind.AFFINE:
            return (z - self.params[0]) / self.params[1]
        if self.kind is TransformKind.POWER:
            return z ** (1.0 / self.params[0])
        if self.kind is TransformKind.LOGARITHM:
            return math.exp(z)
        return math.log(z)

    @classmethod
    def affine(cls, c0: float, c1: float) -> "MonotoneTransform":
        return cls(TransformKind.AFFINE, (c0, c1))

    @classmethod
    def power(cls, p: float) -> "MonotoneTransform":
        return cls(TransformKind.POWER, (p,))

    @classmethod
    def logarithm(cls) -> "MonotoneTransform":
        return cls(TransformKind.LOGARITHM)

    @classmethod
    def exponential(cls) -> "MonotoneTransform":
        return cls(TransformKind.EXPONENTIAL)

    @classmethod
    def reflection(cls) -> "MonotoneTransform":
        """T(x) = 1 - x, the decreasing involution of (0, 1)."""
        return cls(TransformKind.AFFINE, (1.0, -1.0))


@dataclass(frozen=True)
class BunchingReport:
    a1: float
    a2: float
    n: float
    m: float
    x_star: float
    density_cross_lo: float
    density_cross_hi: float
    grid_size: int
    verified: bool
    icv_conclusion: IcvConclusion

    def to_dict(self) -> dict:
        return {
            "a1": self.a1,
            "a2": self.a2,
            "n": self.n,
            "m": self.m,
            "x_star": self.x_star,
            "density_cross_lo": self.density_cross_lo,
            "density_cross_hi": self.density_cross_hi,
            "grid_size": self.grid_size,
            "verified": self.verified,
            "icv_conclusion": self.icv_conclusion.value,
        }


@dataclass(frozen=True)
class XStarCurve:
    points: tuple[tuple[float, float], ...]  # (n, x_star)
    strictly_increasing: bool


@dataclass(frozen=True)
class ConjectureScan:
    points: tuple[tuple[float, float], ...]  # (a, F_a(1/2))
    strictly_decreasing: bool


class TransformedCrossing(NamedTuple):
    crossing: float
    direction_preserved: bool


def sign_changes(values: Sequence[float]) -> int:
    """Number of sign alternations in a sequence, zeros omitted."""
    count = 0
    prev = 0
    for v in values:
        if v == 0.0:
            continue
        s = 1 if v > 0.0 else -1
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def _first_nonzero_sign(values: Sequence[float]) -> int:
    for v in values:
        if v > 0.0:
            return 1
        if v < 0.0:
            return -1
    return 0


def push_forward_map(
    x: float, p1: RestrictedBetaParams, p2: RestrictedBetaParams
) -> float:
    """Probability transform y with F_a2(y) = F_a1(x), mapping member 1 onto member 2."""
    _check_same_family(p1, p2)
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"push_forward_map requires x in (0, 1), got {x}")
    return inv_reg_inc_beta(restricted_cdf(x, p1), p2.shapes)


def crossing_point(
    p1: RestrictedBetaParams, p2: RestrictedBetaParams, xtol: float = DEFAULT_XTOL
) -> float:
    """The unique interior zero x* of F_a2 - F_a1.

    A scan over an interior grid brackets the sign change of the CDF
    difference, then Brent refinement localizes it to xtol.  The value is
    symmetric under swapping a1 and a2 (only the sign pattern flips).
    """
    _check_same_family(p1, p2)
    if p1.a == p2.a:
        raise DegenerateParams(f"a1 == a2 == {p1.a}: the CDFs coincide")

    def diff(x: float) -> float:
        return restricted_cdf(x, p2) - restricted_cdf(x, p1)

    prev_x = None
    prev_s = 0
    for i in range(1, _SCAN_POINTS + 1):
        x = i / (_SCAN_POINTS + 1.0)
        v = diff(x)
        if v == 0.0:
            return x
        s = 1 if v > 0.0 else -1
        if prev_s != 0 and s != prev_s:
            return find_root(diff, (prev_x, x), xtol)
        prev_x, prev_s = x, s
    raise NoSignChange(
        f"no interior sign change of the CDF difference found for a1={p1.a}, a2={p2.a}"
    )


def density_crossings(
    p1: RestrictedBetaParams, p2: RestrictedBetaParams, xtol: float = DEFAULT_XTOL
) -> tuple[float, float]:
    """The two points where the densities of the pair coincide.

    Orders the pair so the ratio t = pdf_lo / pdf_hi diverges at both
    endpoints, minimizes the strictly convex t, and bisects t - 1 on each
    side of the minimizer.  Raises RatioAboveOne when min t >= 1 (no
    crossings), DegenerateParams when a1 == a2.
    """
    _check_same_family(p1, p2)
    if p1.a == p2.a:
        raise DegenerateParams(f"a1 == a2 == {p1.a}: densities are identical")
    lo_p, hi_p = (p1, p2) if p1.a < p2.a else (p2, p1)

    def t(x: float) -> float:
        return density_ratio(x, lo_p, hi_p)

    delta = 1e-9
    # shrink toward the endpoints until the ratio is above one on both flanks
    while t(delta) <= 1.0:
        delta *= 1e-2
        if delta < 1e-250:
            raise RatioAboveOne("density ratio does not exceed one near x=0")
    delta_hi = 1e-9
    while t(1.0 - delta_hi) <= 1.0:
        delta_hi *= 1e-2
        if delta_hi < 1e-250:
            raise RatioAboveOne("density ratio does not exceed one near x=1")

    x_min = minimize_1d(t, (delta, 1.0 - delta_hi), xtol)
    if t(x_min) >= 1.0:
        raise RatioAboveOne(
            f"density ratio minimum {t(x_min)} at x={x_min} never drops below one"
        )
    lo_cross = find_root(lambda x: t(x) - 1.0, (delta, x_min), xtol)
    hi_cross = find_root(lambda x: t(x) - 1.0, (x_min, 1.0 - delta_hi), xtol)
    return (lo_cross, hi_cross)


def check_icv_icx(
    p1: RestrictedBetaParams, p2: RestrictedBetaParams, grid_size: int = DEFAULT_GRID
) -> IcvConclusion:
    """Classify the concave-order relation from the CDF-difference sign pattern.

    With equal means, a single sign change of F_a2 - F_a1 starting negative
    puts the a2 member above in the increasing-concave order (and the a1
    member above in increasing-convex); the mirrored pattern swaps the
    roles.  Anything else on the grid is reported inconclusive.
    """
    _check_same_family(p1, p2)
    if p1.a == p2.a:
        return IcvConclusion.INCONCLUSIVE
    m1 = restricted_moments(p1).mean
    m2 = restricted_moments(p2).mean
    if abs(m1 - m2) > 1e-12:
        return IcvConclusion.INCONCLUSIVE
    values = []
    for i in range(1, grid_size + 1):
        x = i / (grid_size + 1.0)
        values.append(restricted_cdf(x, p2) - restricted_cdf(x, p1))
    if sign_changes(values) != 1:
        return IcvConclusion.INCONCLUSIVE
    first = _first_nonzero_sign(values)
    if first < 0:
        return IcvConclusion.A2_DOMINATES_ICV
    return IcvConclusion.A1_DOMINATES_ICV


def verify_bunching(
    p1: RestrictedBetaParams,
    p2: RestrictedBetaParams,
    grid_size: int = DEFAULT_GRID,
    xtol: float = DEFAULT_XTOL,
) -> BunchingReport:
    """Locate x* and the density crossings, then verify the bunching pattern.

    verified=True requires, on a uniform interior grid (points within xtol
    of x* excluded): the CDF of the smaller-a member strictly above before
    x* and strictly below after it, with exactly one sign change of the
    difference.  The report always carries density_cross_lo < x_star <
    density_cross_hi.
    """
    _check_same_family(p1, p2)
    if grid_size < 64:
        raise DomainError(f"grid_size must be >= 64, got {grid_size}")
    if p1.a == p2.a:
        raise DegenerateParams(f"a1 == a2 == {p1.a}: nothing to verify")
    lo_p, hi_p = (p1, p2) if p1.a < p2.a else (p2, p1)
    x_star = crossing_point(lo_p, hi_p, xtol)
    cross_lo, cross_hi = density_crossings(lo_p, hi_p, xtol)

    values = []
    pattern_ok = True
    for i in range(1, grid_size + 1):
        x = i / (grid_size + 1.0)
        v = restricted_cdf(x, hi_p) - restricted_cdf(x, lo_p)
        values.append(v)
        if abs(x - x_star) <= xtol:
            continue
        if x < x_star:
            if not v < 0.0:
                pattern_ok = False
        elif not v > 0.0:
            pattern_ok = False

    single_change = sign_changes(values) == 1 and _first_nonzero_sign(values) < 0
    verified = pattern_ok and single_change
    if verified:
        conclusion = (
            IcvConclusion.A2_DOMINATES_ICV
            if p2.a > p1.a
            else IcvConclusion.A1_DOMINATES_ICV
        )
    else:
        conclusion = IcvConclusion.INCONCLUSIVE
    return BunchingReport(
        a1=p1.a,
        a2=p2.a,
        n=p1.n,
        m=p1.m,
        x_star=x_star,
        density_cross_lo=cross_lo,
        density_cross_hi=cross_hi,
        grid_size=grid_size,
        verified=verified,
        icv_conclusion=conclusion,
    )


def transform_crossing(
    p1: RestrictedBetaParams,
    p2: RestrictedBetaParams,
    transform: MonotoneTransform,
    xtol: float = DEFAULT_XTOL,
) -> TransformedCrossing:
    """Crossing point of the pair's CDFs after pushing both through a monotone map.

    The transformed pair has CDFs F_i(T^-1(z)) for increasing T and
    1 - F_i(T^-1(z)) for decreasing T; in either case the unique crossing sits
    at T(x*).  It is located here from the transformed CDFs directly (scan
    plus Brent in the transformed coordinate), so agreement with T(x*) is a
    genuine commutation check rather than an identity.
    """
    _check_same_family(p1, p2)
    if p1.a == p2.a:
        raise DegenerateParams(f"a1 == a2 == {p1.a}: the transformed CDFs coincide")
    sgn = 1.0 if transform.direction is Direction.INCREASING else -1.0

    def transformed_diff(z: float) -> float:
        x = transform.inverse(z)
        if x <= 0.0:
            x = 0.0
        elif x >= 1.0:
            x = 1.0
        return sgn * (restricted_cdf(x, p2) - restricted_cdf(x, p1))

    prev_z = None
    prev_s = 0
    for i in range(1, _SCAN_POINTS + 1):
        x = i / (_SCAN_POINTS + 1.0)
        z = transform(x)
        v = transformed_diff(z)
        if v == 0.0:
            return TransformedCrossing(z, transform.direction is Direction.INCREASING)
        s = 1 if v > 0.0 else -1
        if prev_s != 0 and s != prev_s:
            bracket = (prev_z, z) if prev_z < z else (z, prev_z)
            root = find_root(transformed_diff, bracket, xtol)
            return TransformedCrossing(root, transform.direction is Direction.INCREASING)
        prev_z, prev_s = z, s
    raise NoSignChange("no sign change of the transformed CDF difference found")


def xstar_curve(
    n_grid: Sequence[float],
    m: float,
    a1: float,
    a2: float,
    xtol: float = DEFAULT_XTOL,
) -> XStarCurve:
    """x* as a function of n with m, a1, a2 held fixed.

    Requires min(n_grid) >= m (the regime where the curve starts from the
    symmetric anchor x*(m) = 1/2).  The strictly_increasing flag reports the
    empirical monotonicity of the computed sequence; it is an observation,
    not a certificate.
    """
    grid = [float(v) for v in n_grid]
    if not grid:
        raise DomainError("n_grid must be nonempty")
    if any(not math.isfinite(v) or v <= 0.0 for v in grid):
        raise DomainError(f"n_grid values must be finite and > 0, got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("n_grid must be strictly increasing")
    if min(grid) < m:
        raise DomainError(f"min(n_grid)={min(grid)} must be >= m={m}")
    points = []
    for n in grid:
        x_star = crossing_point(
            RestrictedBetaParams(a=a1, n=n, m=m),
            RestrictedBetaParams(a=a2, n=n, m=m),
            xtol,
        )
        points.append((n, x_star))
    increasing = all(b[1] > a[1] for a, b in zip(points, points[1:]))
    return XStarCurve(points=tuple(points), strictly_increasing=increasing)


def conjecture_scan(
    n: float, m: float, a_grid: Sequence[float], strict: bool = True
) -> ConjectureScan:
    """F_a(1/2) over a grid of a values, with a strict-decrease flag.

    The scan is meaningful for n > m, where the mass at or below 1/2 is
    conjectured to fall as a grows; strict=True therefore rejects n <= m.
    strict=False admits the symmetric boundary n == m, where every entry is
    exactly the constant 1/2 (n < m is always rejected).
    """
    grid = [float(v) for v in a_grid]
    if not grid:
        raise DomainError("a_grid must be nonempty")
    if any(not math.isfinite(v) or v <= 0.0 for v in grid):
        raise DomainError(f"a_grid values must be finite and > 0, got {grid}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("a_grid must be strictly increasing")
    if n < m or (strict and n <= m):
        raise DomainError(f"scan requires n > m, got n={n}, m={m}")
    points = []
    for a in grid:
        points.append((a, restricted_cdf(0.5, RestrictedBetaParams(a=a, n=n, m=m))))
    decreasing = all(b[1] < a[1] for a, b in zip(points, points[1:]))
    return ConjectureScan(points=tuple(points), strictly_decreasing=decreasing)


def _gamma_mt(rng: np.random.Generator, shape: float, size: int) -> np.ndarray:
    """Gamma(shape, 1) variates by the Marsaglia-Tsang squeeze method."""
    if shape < 1.0:
        # boost: Gamma(shape) = Gamma(shape + 1) * U^(1/shape)
        g = _gamma_mt(rng, shape + 1.0, size)
        u = rng.random(size)
        return g * u ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(size, dtype=np.float64)
    filled = 0
    while filled < size:
        k = size - filled
        x = rng.standard_normal(k)
        v = (1.0 + c * x) ** 3
        u = rng.random(k)
        pos = v > 0.0
        x2 = x * x
        # cheap squeeze first, log comparison only where the squeeze fails
        logv = np.log(np.where(pos, v, 1.0))
        accept = pos & (
            (u < 1.0 - 0.0331 * x2 * x2) | (np.log(u) < 0.5 * x2 + d * (1.0 - v + logv))
        )
        vals = d * v[accept]
        take = min(vals.size, size - filled)
        out[filled : filled + take] = vals[:take]
        filled += take
    return out


def gamma_mc_oracle(
    n: float, m: float, a: float, samples: int, seed: int = DEFAULT_MC_SEED
) -> float:
    """Monte Carlo estimate of Pr{U < V}, U ~ Gamma(n*a), V ~ Gamma(m*a).

    U/(U+V) is Beta(n*a, m*a) distributed, so this probability equals
    F_a(1/2); the estimate is an implementation-independent cross-check of
    restricted_cdf.  Sampling uses the Marsaglia-Tsang squeeze method on a
    seeded PCG64 stream, so a fixed seed gives a bit-identical estimate.
    """
    for name, v in (("n", n), ("m", m), ("a", a)):
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"{name} must be finite and > 0, got {v}")
    samples = int(samples)
    if samples < 1:
        raise DomainError(f"samples must be >= 1, got {samples}")
    rng = np.random.Generator(np.random.PCG64(seed))
    u = _gamma_mt(rng, n * a, samples)
    v = _gamma_mt(rng, m * a, samples)
    return float(np.count_nonzero(u < v)) / samples
