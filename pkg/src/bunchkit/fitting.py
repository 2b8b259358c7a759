"""Minimum chi-square fitting of GB2 distributions to grouped percent data.

A grouped table is a partition of [0, inf) into bins [e_0, e_1), ...,
[e_{k-1}, inf) with the percent of mass observed in each bin.  The objective
is Pearson's chi-square on proportions, sum (o_i - pi_i)^2 / pi_i, with a
large penalty when any model bin probability degenerates below 1e-12.

Free parameters live in unconstrained coordinates (logit xi, log a, and log
gamma / log b when free) so the simplex never leaves the valid region.  The
default restriction fixes the scale at the median (estimated from the grouped
CDF by linear interpolation when not supplied) and gamma at 1, leaving
(xi, a) free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

from .distributions import GB2Params, XiA, gb2_cdf
from .errors import DomainError, MedianInOpenBin, ValidationError
from .numerics import nelder_mead

CHI_SQUARE_PENALTY = 1e12
_MIN_BIN_PROB = 1e-12

_FIT_FTOL = 1e-14
_FIT_MAXITER = 4000
_SIMPLEX_STEP = 0.25
_COORD_CLAMP = 40.0  # |log| bound keeping exp() comfortably finite


@dataclass(frozen=True)
class GroupedTable:
    """One year of grouped percents.

    edges_kusd lists the finite breakpoints; the last bin [edges[-1], inf) is
    open, so percents has exactly one more entry than there are closed bins:
    len(percents) == len(edges_kusd).
    """

    year: int
    edges_kusd: tuple[float, ...]
    percents: tuple[float, ...]
    median_kusd: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges_kusd", tuple(float(e) for e in self.edges_kusd))
        object.__setattr__(self, "percents", tuple(float(p) for p in self.percents))
        if not self.edges_kusd:
            raise ValidationError(f"year {self.year}: no bin edges")
        if self.edges_kusd[0] < 0.0:
            raise ValidationError(f"year {self.year}: first edge must be >= 0")
        if any(b <= a for a, b in zip(self.edges_kusd, self.edges_kusd[1:])):
            raise ValidationError(f"year {self.year}: edges must be strictly increasing")
        if len(self.percents) != len(self.edges_kusd):
            raise ValidationError(
                f"year {self.year}: {len(self.percents)} percents for "
                f"{len(self.edges_kusd)} edges (need one per closed bin plus the open bin)"
            )
        if any(p < 0.0 or not math.isfinite(p) for p in self.percents):
            raise ValidationError(f"year {self.year}: percents must be finite and >= 0")
        total = sum(self.percents)
        if not 99.0 <= total <= 101.0:
            raise ValidationError(
                f"year {self.year}: percents sum to {total}, outside [99, 101]"
            )
        if self.median_kusd is not None and self.median_kusd <= 0.0:
            raise ValidationError(f"year {self.year}: median must be > 0")

    @property
    def proportions(self) -> tuple[float, ...]:
        total = sum(self.percents)
        return tuple(p / total for p in self.percents)


@dataclass(frozen=True)
class FitConfig:
    """Fit restrictions.

    scale_mode: "median" fixes the scale at the table median (supplied
    median_kusd if present, otherwise interpolated from the grouped CDF);
    "provided" fixes it at scale_value; "free" estimates it.
    gamma_mode: "one" fixes gamma = 1; "free" estimates it.
    start optionally seeds the optimizer with explicit GB2 parameters.
    """

    scale_mode: Literal["median", "provided", "free"] = "median"
    scale_value: float | None = None
    gamma_mode: Literal["one", "free"] = "one"
    start: GB2Params | None = None

    def __post_init__(self):
        if self.scale_mode not in ("median", "provided", "free"):
            raise DomainError(f"unknown scale_mode {self.scale_mode!r}")
        if self.gamma_mode not in ("one", "free"):
            raise DomainError(f"unknown gamma_mode {self.gamma_mode!r}")
        if self.scale_mode == "provided":
            if self.scale_value is None or self.scale_value <= 0.0:
                raise DomainError(
                    f"scale_mode='provided' needs scale_value > 0, got {self.scale_value}"
                )


@dataclass(frozen=True)
class FitResult:
    params: GB2Params
    xi_a: XiA
    chi_square: float
    converged: bool
    iterations: int


def xi_a_from_shapes(alpha: float, beta: float) -> XiA:
    """(xi, a) = (alpha / (alpha + beta), alpha + beta)."""
    if alpha <= 0.0 or beta <= 0.0:
        raise DomainError(f"shapes must be > 0, got ({alpha}, {beta})")
    return XiA(xi=alpha / (alpha + beta), a=alpha + beta)


def bin_probabilities(p: GB2Params, edges: Sequence[float]) -> list[float]:
    """Model probability of each bin, the open top bin included.

    For edges (e_0, ..., e_{k-1}) the bins are [e_0, e_1), ...,
    [e_{k-2}, e_{k-1}), [e_{k-1}, inf); with e_0 = 0 the probabilities sum
    to one.
    """
    edges = [float(e) for e in edges]
    if not edges:
        raise DomainError("edges must be nonempty")
    if edges[0] < 0.0 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise DomainError(f"edges must be increasing with first edge >= 0, got {edges}")
    cdf = [gb2_cdf(e, p) for e in edges]
    probs = [b - a for a, b in zip(cdf, cdf[1:])]
    probs.append(1.0 - cdf[-1])
    return probs


def chi_square_objective(p: GB2Params, table: GroupedTable) -> float:
    """Pearson chi-square of the table's proportions against the model bins.

    Returns the penalty constant 1e12 when any model bin probability falls
    below 1e-12, keeping the objective finite on degenerate parameters.
    """
    pi = bin_probabilities(p, table.edges_kusd)
    if any(v < _MIN_BIN_PROB for v in pi):
        return CHI_SQUARE_PENALTY
    obs = table.proportions
    return sum((o - v) ** 2 / v for o, v in zip(obs, pi))


def estimate_median_from_groups(table: GroupedTable) -> float:
    """Median by linear interpolation of the grouped CDF.

    Walks the cumulative percents to the bin containing the 50% point and
    interpolates linearly inside it.  Raises MedianInOpenBin when the
    cumulative percent at the last finite edge is still below 50.
    """
    cum = 0.0
    for i in range(len(table.edges_kusd) - 1):
        nxt = cum + table.percents[i]
        if nxt >= 50.0:
            width = table.edges_kusd[i + 1] - table.edges_kusd[i]
            return table.edges_kusd[i] + (50.0 - cum) / table.percents[i] * width
        cum = nxt
    raise MedianInOpenBin(
        f"year {table.year}: cumulative percent at the last finite edge is "
        f"{cum}, below 50"
    )


def _logit(p: float) -> float:
    return math.log(p) - math.log1p(-p)


def _expit(t: float) -> float:
    if t >= 0.0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def _clamp(v: float) -> float:
    return max(-_COORD_CLAMP, min(_COORD_CLAMP, v))


def fit_gb2(table: GroupedTable, config: FitConfig = FitConfig()) -> FitResult:
    """Minimum chi-square GB2 fit of one grouped table.

    The returned parameters are in the table's original units; under the
    median/provided scale modes the reported scale_b is the fixed value.
    converged=False flags an optimizer that exhausted its budget, or a table
    with fewer informative bins than free parameters; the result is still
    returned.  May raise MedianInOpenBin when scale_mode="median" and the
    grouped CDF never reaches 50% in a closed bin.
    """
    if config.scale_mode == "median":
        b_fixed = (
            table.median_kusd
            if table.median_kusd is not None
            else estimate_median_from_groups(table)
        )
    elif config.scale_mode == "provided":
        b_fixed = float(config.scale_value)
    else:
        b_fixed = None
    gamma_fixed = 1.0 if config.gamma_mode == "one" else None

    if config.start is not None:
        s = config.start
        xi0 = s.alpha / (s.alpha + s.beta)
        a0 = s.alpha + s.beta
        g0 = s.gamma
        b0 = s.scale_b
    else:
        xi0, a0, g0 = 0.5, 4.0, 1.0
        if b_fixed is not None:
            b0 = b_fixed
        else:
            # free scale: a rough starting point is enough, so fall back to
            # the last finite edge when the median sits in the open bin
            try:
                b0 = estimate_median_from_groups(table)
            except MedianInOpenBin:
                b0 = table.edges_kusd[-1]
                if b0 <= 0.0:
                    b0 = 1.0

    coords = [_logit(xi0), math.log(a0)]
    if gamma_fixed is None:
        coords.append(math.log(g0))
    if b_fixed is None:
        coords.append(math.log(b0))

    def unpack(vec: Sequence[float]) -> GB2Params:
        xi = _expit(_clamp(vec[0]))
        a = math.exp(_clamp(vec[1]))
        i = 2
        if gamma_fixed is None:
            g = math.exp(_clamp(vec[i]))
            i += 1
        else:
            g = gamma_fixed
        b = math.exp(_clamp(vec[i])) if b_fixed is None else b_fixed
        # expit saturation at the clamp bound would yield shape 0
        xi = min(max(xi, 1e-17), 1.0 - 1e-17)
        return GB2Params(scale_b=b, gamma=g, alpha=a * xi, beta=a * (1.0 - xi))

    def objective(vec: Sequence[float]) -> float:
        return chi_square_objective(unpack(vec), table)

    n_free = len(coords)
    dof = len(table.percents) - 1  # proportions carry one linear constraint
    if n_free > dof:
        params = unpack(coords)
        return FitResult(
            params=params,
            xi_a=xi_a_from_shapes(params.alpha, params.beta),
            chi_square=chi_square_objective(params, table),
            converged=False,
            iterations=0,
        )

    res = nelder_mead(
        objective,
        coords,
        scale=[_SIMPLEX_STEP] * n_free,
        maxiter=_FIT_MAXITER,
        ftol=_FIT_FTOL,
    )
    params = unpack(res.point)
    return FitResult(
        params=params,
        xi_a=xi_a_from_shapes(params.alpha, params.beta),
        chi_square=res.value,
        converged=res.converged,
        iterations=res.iterations,
    )
