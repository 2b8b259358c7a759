"""Figure rendering for the CLI report paths.

Each function writes one PNG next to the delimited output and returns the
path.  matplotlib is imported lazily with the Agg backend so plain table runs
never pay for it.
"""

from __future__ import annotations

from typing import Sequence

from .bunching import BunchingReport, ConjectureScan, XStarCurve
from .distributions import RestrictedBetaParams, beta_pdf, restricted_cdf
from .income import TrendRow


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_bunching_report(report: BunchingReport, path: str) -> str:
    """CDF pair with x* marked, densities with their two crossings below."""
    plt = _pyplot()
    p1 = RestrictedBetaParams(a=report.a1, n=report.n, m=report.m)
    p2 = RestrictedBetaParams(a=report.a2, n=report.n, m=report.m)
    xs = [i / 512.0 for i in range(1, 512)]
    fig, (ax_cdf, ax_pdf) = plt.subplots(2, 1, figsize=(7.0, 7.0), sharex=True)
    ax_cdf.plot(xs, [restricted_cdf(x, p1) for x in xs], label=f"a = {report.a1:g}")
    ax_cdf.plot(xs, [restricted_cdf(x, p2) for x in xs], label=f"a = {report.a2:g}")
    ax_cdf.axvline(report.x_star, color="0.4", ls=":", label="x*")
    ax_cdf.set_ylabel("CDF")
    ax_cdf.legend(loc="best")
    title = "bunching verified" if report.verified else "bunching NOT verified"
    ax_cdf.set_title(f"Beta({report.n:g}a, {report.m:g}a): {title}")

    def safe_pdf(x, p):
        try:
            return beta_pdf(x, p.shapes)
        except Exception:
            return float("nan")

    ax_pdf.plot(xs, [safe_pdf(x, p1) for x in xs])
    ax_pdf.plot(xs, [safe_pdf(x, p2) for x in xs])
    for c in (report.density_cross_lo, report.density_cross_hi):
        ax_pdf.axvline(c, color="0.6", ls="--")
    ax_pdf.axvline(report.x_star, color="0.4", ls=":")
    ax_pdf.set_xlabel("x")
    ax_pdf.set_ylabel("density")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_xstar_curve(curve: XStarCurve, m: float, a1: float, a2: float, path: str) -> str:
    plt = _pyplot()
    ns = [p[0] for p in curve.points]
    xs = [p[1] for p in curve.points]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(ns, xs, marker="o", ms=3)
    ax.axhline(0.5, color="0.6", ls="--", lw=0.8)
    ax.set_xlabel("n")
    ax.set_ylabel("x*")
    tag = "strictly increasing" if curve.strictly_increasing else "not monotone"
    ax.set_title(f"crossing point vs n (m={m:g}, a1={a1:g}, a2={a2:g}): {tag}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_conjecture_scan(
    scan: ConjectureScan,
    n: float,
    m: float,
    path: str,
    mc_points: Sequence[tuple[float, float]] | None = None,
) -> str:
    plt = _pyplot()
    avals = [p[0] for p in scan.points]
    fvals = [p[1] for p in scan.points]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(avals, fvals, marker="o", ms=3, label="F_a(1/2)")
    if mc_points:
        ax.plot(
            [p[0] for p in mc_points],
            [p[1] for p in mc_points],
            ls="none",
            marker="x",
            color="C3",
            label="MC estimate",
        )
        ax.legend(loc="best")
    ax.set_xlabel("a")
    ax.set_ylabel("F_a(1/2)")
    tag = "strictly decreasing" if scan.strictly_decreasing else "not monotone"
    ax.set_title(f"mass at or below 1/2 vs a (n={n:g}, m={m:g}): {tag}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_trend(
    rows: Sequence[TrendRow],
    path: str,
    gini_official: dict[int, float] | None = None,
) -> str:
    """Year trend: negative fitted a on the left axis, Gini on the right."""
    plt = _pyplot()
    years = [r.year for r in rows]
    fig, ax = plt.subplots(figsize=(7.5, 4.5))
    ax.plot(years, [r.neg_a for r in rows], marker="o", color="C0", label="-a_hat")
    ax.set_xlabel("year")
    ax.set_ylabel("-a_hat", color="C0")
    ax.tick_params(axis="y", labelcolor="C0")
    ax2 = ax.twinx()
    ax2.plot(years, [r.gini_model for r in rows], marker="s", color="C1", label="model Gini")
    if gini_official:
        official_years = [y for y in years if y in gini_official]
        ax2.plot(
            official_years,
            [gini_official[y] for y in official_years],
            marker="^",
            ls="--",
            color="C2",
            label="official Gini",
        )
    ax2.set_ylabel("Gini", color="C1")
    ax2.tick_params(axis="y", labelcolor="C1")
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, loc="best")
    ax.set_title("bunching (-a) vs Gini by year")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
