"""Command-line interface.

Subcommands: compare, fit, trend, xstar, conjecture.  Exit codes: 0 success,
1 usage or input errors, 2 bunching verification failure, 3 partial fit
failure (some years did not converge).  Every output starts with a comment
header echoing the effective flags, and all three formats (text, json, csv)
print numbers through the same shortest-round-trip formatter, so they carry
identical values.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

from .bunching import (
    DEFAULT_GRID,
    DEFAULT_MC_SEED,
    conjecture_scan,
    gamma_mc_oracle,
    verify_bunching,
    xstar_curve,
)
from .distributions import RestrictedBetaParams
from .errors import BunchkitError
from .fitting import FitConfig, fit_gb2
from .income import (
    TrendRow,
    build_trend,
    compare_years,
    format_number as fmt,
    load_gini_official,
    load_grouped_csv,
    write_trend_csv,
)
from .numerics import DEFAULT_XTOL


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _fmt_any(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt(v)
    return str(v)


def _write(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _parse_range(spec: str) -> list[float]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise _UsageError(f"range must be lo:hi:step, got {spec!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"range parts must be numbers, got {spec!r}") from None
    if not all(map(math.isfinite, (lo, hi, step))) or step <= 0.0 or hi < lo:
        raise _UsageError(f"range needs finite lo <= hi and step > 0, got {spec!r}")
    vals = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 0.5 * step:
            break
        vals.append(v)
        k += 1
    return vals


def _seed_from_env() -> int:
    raw = os.environ.get("BUNCHKIT_SEED")
    if raw is None:
        return DEFAULT_MC_SEED
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"BUNCHKIT_SEED must be an integer, got {raw!r}") from None


def _scale_config(raw: str, gamma_mode: str) -> FitConfig:
    if raw == "median":
        return FitConfig(scale_mode="median", gamma_mode=gamma_mode)
    if raw == "free":
        return FitConfig(scale_mode="free", gamma_mode=gamma_mode)
    try:
        value = float(raw)
    except ValueError:
        raise _UsageError(
            f"--scale must be 'median', 'free', or a number, got {raw!r}"
        ) from None
    return FitConfig(scale_mode="provided", scale_value=value, gamma_mode=gamma_mode)


def _cmd_compare(args) -> int:
    p1 = RestrictedBetaParams(a=args.a1, n=args.n, m=args.m)
    p2 = RestrictedBetaParams(a=args.a2, n=args.n, m=args.m)
    report = verify_bunching(p1, p2, grid_size=args.grid, xtol=args.xtol)
    header = (
        f"# compare n={fmt(args.n)} m={fmt(args.m)} a1={fmt(args.a1)} a2={fmt(args.a2)}"
        f" grid={args.grid} xtol={fmt(args.xtol)}"
    )
    fields = [
        ("x_star", report.x_star),
        ("density_cross_lo", report.density_cross_lo),
        ("density_cross_hi", report.density_cross_hi),
        ("verified", report.verified),
        ("icv_conclusion", report.icv_conclusion.value),
    ]
    if args.format == "json":
        obj = {
            "command": "compare",
            "inputs": {
                "n": args.n,
                "m": args.m,
                "a1": args.a1,
                "a2": args.a2,
                "grid": args.grid,
                "xtol": args.xtol,
            },
        }
        obj.update({k: v for k, v in fields})
        text = json.dumps(obj, indent=2) + "\n"
    elif args.format == "csv":
        text = (
            header
            + "\n"
            + ",".join(k for k, _ in fields)
            + "\n"
            + ",".join(_fmt_any(v) for _, v in fields)
            + "\n"
        )
    else:
        text = header + "\n" + "".join(f"{k} = {_fmt_any(v)}\n" for k, v in fields)
    _write(text, args.out)
    if args.plot:
        from . import figures

        figures.plot_bunching_report(report, args.plot)
    return 0 if report.verified else 2


def _cmd_xstar(args) -> int:
    grid = _parse_range(args.n_range)
    curve = xstar_curve(grid, args.m, args.a1, args.a2, xtol=args.xtol)
    header = (
        f"# xstar m={fmt(args.m)} a1={fmt(args.a1)} a2={fmt(args.a2)}"
        f" n_range={args.n_range} xtol={fmt(args.xtol)}"
    )
    verdict = ("strictly_increasing", curve.strictly_increasing)
    if args.format == "json":
        obj = {
            "command": "xstar",
            "inputs": {
                "m": args.m,
                "a1": args.a1,
                "a2": args.a2,
                "n_range": args.n_range,
                "xtol": args.xtol,
            },
            "points": [[n, x] for n, x in curve.points],
            "strictly_increasing": curve.strictly_increasing,
        }
        text = json.dumps(obj, indent=2) + "\n"
    elif args.format == "text":
        lines = [header]
        lines += [f"n={fmt(n)} x_star={fmt(x)}" for n, x in curve.points]
        lines.append(f"{verdict[0]} = {_fmt_any(verdict[1])}")
        text = "\n".join(lines) + "\n"
    else:
        lines = [header, "n,x_star"]
        lines += [f"{fmt(n)},{fmt(x)}" for n, x in curve.points]
        lines.append(f"# {verdict[0]} = {_fmt_any(verdict[1])}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    if args.plot:
        from . import figures

        figures.plot_xstar_curve(curve, args.m, args.a1, args.a2, args.plot)
    return 0


def _cmd_conjecture(args) -> int:
    grid = _parse_range(args.a_range)
    scan = conjecture_scan(args.n, args.m, grid)
    seed = _seed_from_env()
    mc_points = None
    if args.mc_samples > 0:
        mc_points = [
            (a, gamma_mc_oracle(args.n, args.m, a, args.mc_samples, seed=seed + i))
            for i, (a, _) in enumerate(scan.points)
        ]
    header = (
        f"# conjecture n={fmt(args.n)} m={fmt(args.m)} a_range={args.a_range}"
        f" mc_samples={args.mc_samples}"
    )
    if args.mc_samples > 0:
        header += f" seed={seed}"
    if args.format == "json":
        obj = {
            "command": "conjecture",
            "inputs": {
                "n": args.n,
                "m": args.m,
                "a_range": args.a_range,
                "mc_samples": args.mc_samples,
            },
            "points": [[a, v] for a, v in scan.points],
            "strictly_decreasing": scan.strictly_decreasing,
        }
        if mc_points is not None:
            obj["inputs"]["seed"] = seed
            obj["mc_points"] = [[a, v] for a, v in mc_points]
        text = json.dumps(obj, indent=2) + "\n"
    elif args.format == "text":
        lines = [header]
        if mc_points is None:
            lines += [f"a={fmt(a)} F_half={fmt(v)}" for a, v in scan.points]
        else:
            lines += [
                f"a={fmt(a)} F_half={fmt(v)} mc_estimate={fmt(mc)}"
                for (a, v), (_, mc) in zip(scan.points, mc_points)
            ]
        lines.append(f"strictly_decreasing = {_fmt_any(scan.strictly_decreasing)}")
        text = "\n".join(lines) + "\n"
    else:
        lines = [header]
        if mc_points is None:
            lines.append("a,F_half")
            lines += [f"{fmt(a)},{fmt(v)}" for a, v in scan.points]
        else:
            lines.append("a,F_half,mc_estimate")
            lines += [
                f"{fmt(a)},{fmt(v)},{fmt(mc)}"
                for (a, v), (_, mc) in zip(scan.points, mc_points)
            ]
        lines.append(f"# strictly_decreasing = {_fmt_any(scan.strictly_decreasing)}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    if args.plot:
        from . import figures

        figures.plot_conjecture_scan(scan, args.n, args.m, args.plot, mc_points=mc_points)
    return 0


def _fit_rows(tables, config):
    rows = []
    for table in tables:
        try:
            fr = fit_gb2(table, config)
        except BunchkitError as exc:
            rows.append((table.year, None, str(exc)))
            continue
        rows.append((table.year, fr, ""))
    return rows


def _trend_row_of(year: int, fr, note: str) -> TrendRow:
    if fr is None:
        return TrendRow(
            year=year,
            a_hat=math.nan,
            xi_hat=math.nan,
            neg_a=math.nan,
            gini_model=math.nan,
            chi_square=math.nan,
            converged=False,
            note=note,
        )
    return TrendRow(
        year=year,
        a_hat=fr.xi_a.a,
        xi_hat=fr.xi_a.xi,
        neg_a=-fr.xi_a.a,
        gini_model=math.nan,
        chi_square=fr.chi_square,
        converged=fr.converged,
        note=note,
    )


def _cmd_fit(args) -> int:
    tables = load_grouped_csv(args.input)
    config = _scale_config(args.scale, args.gamma_mode)
    rows = _fit_rows(tables, config)
    header = (
        f"# fit input={args.input} scale={args.scale} gamma_mode={args.gamma_mode}"
        f" xi_tol={fmt(args.xi_tol)}"
    )
    columns = (
        "year,scale_b,gamma,alpha,beta,xi,a,chi_square,iterations,converged,note"
    )
    comparisons = []
    trend_like = [_trend_row_of(year, fr, note) for year, fr, note in rows]
    for r1, r2 in zip(trend_like, trend_like[1:]):
        verdict = compare_years(r1, r2, xi_tolerance=args.xi_tol)
        comparisons.append((r1.year, r2.year, verdict.value))

    if args.format == "json":
        obj = {
            "command": "fit",
            "inputs": {
                "input": args.input,
                "scale": args.scale,
                "gamma_mode": args.gamma_mode,
                "xi_tol": args.xi_tol,
            },
            "years": [],
            "comparisons": [
                {"year1": y1, "year2": y2, "verdict": v} for y1, y2, v in comparisons
            ],
        }
        for year, fr, note in rows:
            if fr is None:
                obj["years"].append({"year": year, "converged": False, "note": note})
            else:
                obj["years"].append(
                    {
                        "year": year,
                        "scale_b": fr.params.scale_b,
                        "gamma": fr.params.gamma,
                        "alpha": fr.params.alpha,
                        "beta": fr.params.beta,
                        "xi": fr.xi_a.xi,
                        "a": fr.xi_a.a,
                        "chi_square": fr.chi_square,
                        "iterations": fr.iterations,
                        "converged": fr.converged,
                        "note": note,
                    }
                )
        text = json.dumps(obj, indent=2) + "\n"
    else:
        lines = [header, columns]
        for year, fr, note in rows:
            if fr is None:
                lines.append(f"{year},,,,,,,,,false,{note}")
            else:
                lines.append(
                    ",".join(
                        [
                            str(year),
                            fmt(fr.params.scale_b),
                            fmt(fr.params.gamma),
                            fmt(fr.params.alpha),
                            fmt(fr.params.beta),
                            fmt(fr.xi_a.xi),
                            fmt(fr.xi_a.a),
                            fmt(fr.chi_square),
                            str(fr.iterations),
                            _fmt_any(fr.converged),
                            note,
                        ]
                    )
                )
        for y1, y2, v in comparisons:
            lines.append(f"# compare {y1}->{y2}: {v}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out)
    all_ok = all(fr is not None and fr.converged for _, fr, _ in rows)
    return 0 if all_ok else 3


def _cmd_trend(args) -> int:
    tables = load_grouped_csv(args.input)
    config = _scale_config(args.scale, args.gamma_mode)
    rows = build_trend(tables, config)
    official = load_gini_official(args.gini_official) if args.gini_official else None
    buf = io.StringIO()
    write_trend_csv(rows, buf, official)
    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
        print(
            f"# trend input={args.input} scale={args.scale}"
            f" gamma_mode={args.gamma_mode} xi_tol={fmt(args.xi_tol)} out={args.out}"
        )
        for row in rows:
            line = (
                f"year {row.year}: a_hat={fmt(row.a_hat)} xi_hat={fmt(row.xi_hat)}"
                f" gini_model={fmt(row.gini_model)} chi_square={fmt(row.chi_square)}"
                f" converged={_fmt_any(row.converged)}"
            )
            if row.note:
                line += f" note={row.note!r}"
            print(line)
        for r1, r2 in zip(rows, rows[1:]):
            verdict = compare_years(r1, r2, xi_tolerance=args.xi_tol)
            print(f"{r1.year}->{r2.year}: {verdict.value}")
        n_conv = sum(1 for r in rows if r.converged)
        print(f"wrote {args.out} ({len(rows)} years, {n_conv} converged)")
    if args.plot:
        from . import figures

        figures.plot_trend(rows, args.plot, gini_official=official)
    return 0 if all(r.converged for r in rows) else 3


def _add_fit_flags(sub) -> None:
    sub.add_argument("input", help="grouped-income CSV path")
    sub.add_argument(
        "--scale",
        default="median",
        help="'median' (fix scale at the year's median), 'free', or a number (default: median)",
    )
    sub.add_argument(
        "--gamma-mode",
        choices=("one", "free"),
        default="one",
        help="fix gamma at 1 or estimate it (default: one)",
    )
    sub.add_argument(
        "--xi-tol",
        type=float,
        default=0.005,
        help="max |xi1 - xi2| for year comparability (default: 0.005)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bunchkit", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    c = subs.add_parser("compare", parents=[], help="verify the bunching pattern for one pair")
    c.add_argument("--n", type=float, required=True)
    c.add_argument("--m", type=float, required=True)
    c.add_argument("--a1", type=float, required=True)
    c.add_argument("--a2", type=float, required=True)
    c.add_argument("--grid", type=int, default=DEFAULT_GRID)
    c.add_argument("--xtol", type=float, default=DEFAULT_XTOL)
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.add_argument("--out", default=None, help="write output here instead of stdout")
    c.add_argument("--plot", default=None, help="also render a figure to this path")
    c.set_defaults(func=_cmd_compare)

    x = subs.add_parser("xstar", help="crossing point as a function of n")
    x.add_argument("--m", type=float, required=True)
    x.add_argument("--n-range", required=True, help="lo:hi:step (inclusive)")
    x.add_argument("--a1", type=float, required=True)
    x.add_argument("--a2", type=float, required=True)
    x.add_argument("--xtol", type=float, default=DEFAULT_XTOL)
    x.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    x.add_argument("--out", default=None)
    x.add_argument("--plot", default=None)
    x.set_defaults(func=_cmd_xstar)

    j = subs.add_parser("conjecture", help="F_a(1/2) over a range of a (requires n > m)")
    j.add_argument("--n", type=float, required=True)
    j.add_argument("--m", type=float, required=True)
    j.add_argument("--a-range", required=True, help="lo:hi:step (inclusive)")
    j.add_argument(
        "--mc-samples",
        type=int,
        default=0,
        help="add a Monte Carlo cross-check column with this many samples per point"
        " (seed from BUNCHKIT_SEED)",
    )
    j.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    j.add_argument("--out", default=None)
    j.add_argument("--plot", default=None)
    j.set_defaults(func=_cmd_conjecture)

    f = subs.add_parser("fit", help="fit each year, print fitted parameters")
    _add_fit_flags(f)
    f.add_argument("--format", choices=("text", "json", "csv"), default="csv")
    f.add_argument("--out", default=None)
    f.set_defaults(func=_cmd_fit)

    t = subs.add_parser("trend", help="fit each year, write the trend CSV, print a summary")
    _add_fit_flags(t)
    t.add_argument("--gini-official", default=None, help="companion year,gini CSV")
    t.add_argument("--out", default="trend.csv", help="trend CSV path, or - for stdout")
    t.add_argument("--plot", default=None)
    t.set_defaults(func=_cmd_trend)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BunchkitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
