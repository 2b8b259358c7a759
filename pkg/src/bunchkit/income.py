"""Grouped-income ingestion, model Gini, and the year-over-year trend table.

The input CSV carries one row per bin with the header
``year,bin_lower_kusd,bin_upper_kusd,percent`` (an empty upper bound marks
the open top bin; an optional ``median_kusd`` column may repeat the year's
median on each row).  An optional companion file with header ``year,gini``
supplies official Gini values for the output table.

The model Gini uses Gini = 1 - (1/mu) * integral of (1 - F)^2, rewritten
through the Beta-kernel substitution y = (x/b)^gamma / (1 + (x/b)^gamma) so
the quadrature runs over (0, 1):

    integral (1-F(x))^2 dx
        = integral_0^1 (1 - I_y(alpha, beta))^2 * (b/gamma)
              * y^(1/gamma - 1) * (1-y)^(-1/gamma - 1) dy

which exists only under the moment condition beta * gamma > 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .distributions import GB2Params, gb2_mean
from .errors import BunchkitError, MeanUndefined, ParseError, ValidationError
from .fitting import FitConfig, FitResult, GroupedTable, fit_gb2
from .numerics import integrate
from .specfun import ShapePair, reg_inc_beta

from enum import Enum

_GINI_TOL = 1e-9

TREND_COLUMNS = (
    "year",
    "a_hat",
    "xi_hat",
    "neg_a",
    "gini_model",
    "gini_official",
    "chi_square",
    "converged",
)


class YearComparison(str, Enum):
    YEAR1_MORE_BUNCHED = "year1_more_bunched"
    YEAR2_MORE_BUNCHED = "year2_more_bunched"
    NOT_COMPARABLE = "not_comparable"


@dataclass(frozen=True)
class TrendRow:
    year: int
    a_hat: float
    xi_hat: float
    neg_a: float
    gini_model: float
    chi_square: float
    converged: bool
    note: str = ""


_REQUIRED_COLUMNS = ("year", "bin_lower_kusd", "bin_upper_kusd", "percent")


def _parse_float(raw: str, line: int, column: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"line {line}: column {column!r} is not a number: {raw!r}") from None


def load_grouped_csv(path) -> list[GroupedTable]:
    """Read a grouped-income CSV into one validated GroupedTable per year."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file")
        missing = [c for c in _REQUIRED_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ParseError(f"{path}: header is missing columns {missing}")
        has_median = "median_kusd" in reader.fieldnames

        by_year: dict[int, list[tuple[float, float | None, float, float | None, int]]] = {}
        for row in reader:
            line = reader.line_num
            raw_year = (row.get("year") or "").strip()
            try:
                year = int(raw_year)
            except ValueError:
                raise ParseError(f"line {line}: column 'year' is not an integer: {raw_year!r}") from None
            lower = _parse_float((row.get("bin_lower_kusd") or "").strip(), line, "bin_lower_kusd")
            raw_upper = (row.get("bin_upper_kusd") or "").strip()
            upper = None if raw_upper == "" else _parse_float(raw_upper, line, "bin_upper_kusd")
            percent = _parse_float((row.get("percent") or "").strip(), line, "percent")
            median = None
            if has_median:
                raw_median = (row.get("median_kusd") or "").strip()
                if raw_median != "":
                    median = _parse_float(raw_median, line, "median_kusd")
            by_year.setdefault(year, []).append((lower, upper, percent, median, line))
    if not by_year:
        raise ParseError(f"{path}: no data rows")

    tables = []
    for year in sorted(by_year):
        rows = sorted(by_year[year], key=lambda r: r[0])
        open_rows = [r for r in rows if r[1] is None]
        if len(open_rows) != 1 or rows[-1][1] is not None:
            raise ValidationError(
                f"year {year}: need exactly one open top bin (empty bin_upper_kusd on the last row)"
            )
        for cur, nxt in zip(rows, rows[1:]):
            if cur[1] != nxt[0]:
                raise ValidationError(
                    f"year {year}: bins are not contiguous at line {nxt[4]} "
                    f"(upper {cur[1]} vs next lower {nxt[0]})"
                )
        medians = {r[3] for r in rows if r[3] is not None}
        if len(medians) > 1:
            raise ValidationError(f"year {year}: conflicting median_kusd values {sorted(medians)}")
        tables.append(
            GroupedTable(
                year=year,
                edges_kusd=tuple(r[0] for r in rows),
                percents=tuple(r[2] for r in rows),
                median_kusd=medians.pop() if medians else None,
            )
        )
    return tables


def load_gini_official(path) -> dict[int, float]:
    """Read the companion ``year,gini`` CSV into a year -> Gini map."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty file")
        if "year" not in reader.fieldnames or "gini" not in reader.fieldnames:
            raise ParseError(f"{path}: header must contain 'year' and 'gini'")
        out: dict[int, float] = {}
        for row in reader:
            line = reader.line_num
            try:
                year = int((row.get("year") or "").strip())
            except ValueError:
                raise ParseError(f"line {line}: column 'year' is not an integer") from None
            out[year] = _parse_float((row.get("gini") or "").strip(), line, "gini")
    return out


def model_gini(p: GB2Params) -> float:
    """Gini coefficient of a GB2 distribution.

    Gini = 1 - (1/mu) * integral (1 - F)^2, with the survival integral
    evaluated in the Beta coordinate over (0, 1).  Raises MeanUndefined
    when beta * gamma <= 1.
    """
    if not p.has_mean:
        raise MeanUndefined(
            f"beta*gamma = {p.beta * p.gamma} <= 1: the GB2 mean diverges, Gini undefined"
        )
    mu = gb2_mean(p)
    shapes = ShapePair(p.alpha, p.beta)
    inv_g = 1.0 / p.gamma
    scale = p.scale_b * inv_g

    def survival_sq(y: float) -> float:
        s = 1.0 - reg_inc_beta(y, shapes)
        return s * s * scale * y ** (inv_g - 1.0) * (1.0 - y) ** (-inv_g - 1.0)

    total = integrate(survival_sq, 0.0, 1.0, tol=_GINI_TOL)
    return 1.0 - total / mu


def build_trend(tables: Sequence[GroupedTable], config: FitConfig = FitConfig()) -> list[TrendRow]:
    """Fit every year and assemble the trend table, flagging failures in place.

    A year whose fit raises (e.g. median in the open bin) or whose Gini is
    undefined is kept as a row with nan metrics and a note, never dropped.
    """
    rows = []
    for table in sorted(tables, key=lambda t: t.year):
        try:
            fr: FitResult = fit_gb2(table, config)
        except BunchkitError as exc:
            rows.append(
                TrendRow(
                    year=table.year,
                    a_hat=math.nan,
                    xi_hat=math.nan,
                    neg_a=math.nan,
                    gini_model=math.nan,
                    chi_square=math.nan,
                    converged=False,
                    note=str(exc),
                )
            )
            continue
        note = ""
        try:
            gini = model_gini(fr.params)
        except MeanUndefined as exc:
            gini = math.nan
            note = str(exc)
        rows.append(
            TrendRow(
                year=table.year,
                a_hat=fr.xi_a.a,
                xi_hat=fr.xi_a.xi,
                neg_a=-fr.xi_a.a,
                gini_model=gini,
                chi_square=fr.chi_square,
                converged=fr.converged,
                note=note,
            )
        )
    return rows


def compare_years(
    row1: TrendRow, row2: TrendRow, xi_tolerance: float = 0.005
) -> YearComparison:
    """Bunching verdict for two fitted years.

    Comparable only when both fits converged and the xi estimates agree
    within xi_tolerance (the single-varying-parameter requirement); then the
    year with the larger a_hat is the more bunched one.
    """
    if not (row1.converged and row2.converged):
        return YearComparison.NOT_COMPARABLE
    if not (math.isfinite(row1.a_hat) and math.isfinite(row2.a_hat)):
        return YearComparison.NOT_COMPARABLE
    if abs(row1.xi_hat - row2.xi_hat) > xi_tolerance:
        return YearComparison.NOT_COMPARABLE
    if row1.a_hat == row2.a_hat:
        return YearComparison.NOT_COMPARABLE
    if row2.a_hat > row1.a_hat:
        return YearComparison.YEAR2_MORE_BUNCHED
    return YearComparison.YEAR1_MORE_BUNCHED


def format_number(v: float) -> str:
    """Shortest round-trip decimal form, shared by every output format."""
    return repr(float(v))


def write_trend_csv(
    rows: Iterable[TrendRow],
    out: TextIO,
    gini_official: dict[int, float] | None = None,
) -> None:
    """Write the trend table; identical inputs produce identical bytes."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TREND_COLUMNS)
    for row in rows:
        official = (gini_official or {}).get(row.year)
        writer.writerow(
            [
                row.year,
                format_number(row.a_hat),
                format_number(row.xi_hat),
                format_number(row.neg_a),
                format_number(row.gini_model),
                "" if official is None else format_number(official),
                format_number(row.chi_square),
                "true" if row.converged else "false",
            ]
        )
