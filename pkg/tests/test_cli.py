"""CLI contract tests.

Golden files under tests/golden/ freeze the exact bytes of the oracle runs;
the exit-code matrix, format identity, seeding, and file-output behavior are
exercised through cli.main directly so stdout/stderr stay capturable.
"""

import json
import math
from pathlib import Path

import pytest

from bunchkit import cli
from bunchkit.bunching import BunchingReport, IcvConclusion
from bunchkit.distributions import gb2_cdf, gb2_quantile, GB2Params
from bunchkit.income import format_number as fmt

GOLDEN = Path(__file__).parent / "golden"

EDGES = (0.0, 15.0, 25.0, 35.0, 50.0, 75.0, 100.0, 150.0, 200.0)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def synth_csv_rows(year, alpha, beta, b=62.0, gamma=1.0, median=False):
    """Rows of an exact-model grouped table for one year."""
    params = GB2Params(scale_b=b, gamma=gamma, alpha=alpha, beta=beta)
    cum = [gb2_cdf(e, params) for e in EDGES]
    med = fmt(gb2_quantile(0.5, params)) if median else ""
    rows = []
    for lo, hi, c0, c1 in zip(EDGES, EDGES[1:], cum, cum[1:]):
        pct = fmt((c1 - c0) * 100.0)
        rows.append(f"{year},{fmt(lo)},{fmt(hi)},{pct}" + ("," + med if median else ""))
    top = fmt((1.0 - cum[-1]) * 100.0)
    rows.append(f"{year},{fmt(EDGES[-1])},,{top}" + ("," + med if median else ""))
    return rows


def write_income_csv(path, rows, median_col=False):
    header = "year,bin_lower_kusd,bin_upper_kusd,percent"
    if median_col:
        header += ",median_kusd"
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return str(path)


class TestGolden:
    @pytest.mark.parametrize(
        "name,argv",
        [
            ("compare_sym.txt", ["compare", "--n", "1", "--m", "1", "--a1", "1", "--a2", "2"]),
            (
                "compare_asym.json",
                ["compare", "--n", "2", "--m", "1", "--a1", "1", "--a2", "2", "--format", "json"],
            ),
            (
                "compare_asym.csv",
                ["compare", "--n", "2", "--m", "1", "--a1", "1", "--a2", "2", "--format", "csv"],
            ),
            ("xstar.csv", ["xstar", "--m", "1", "--n-range", "1:2:0.25", "--a1", "1", "--a2", "2"]),
            ("conjecture.csv", ["conjecture", "--n", "2", "--m", "1", "--a-range", "1:2:1"]),
        ],
    )
    def test_byte_exact(self, capsys, name, argv):
        code, out, err = run(capsys, *argv)
        assert code == 0
        assert err == ""
        assert out == (GOLDEN / name).read_text()

    def test_golden_values_still_match_oracles(self):
        # guards the frozen files themselves against accidental edits
        obj = json.loads((GOLDEN / "compare_asym.json").read_text())
        assert abs(obj["x_star"] - (1.0 + math.sqrt(17.0)) / 8.0) <= 1e-8
        rows = [
            l for l in (GOLDEN / "conjecture.csv").read_text().splitlines()
            if l and not l.startswith("#")
        ][1:]
        vals = [float(r.split(",")[1]) for r in rows]
        assert abs(vals[0] - 0.25) <= 1e-12
        assert abs(vals[1] - 0.1875) <= 1e-12


class TestFormatIdentity:
    def test_text_json_csv_carry_identical_numbers(self, capsys):
        base = ["compare", "--n", "2", "--m", "1", "--a1", "1", "--a2", "2"]
        _, text, _ = run(capsys, *base)
        _, js, _ = run(capsys, *base, "--format", "json")
        _, csvtext, _ = run(capsys, *base, "--format", "csv")

        text_vals = {}
        for line in text.splitlines():
            if " = " in line:
                k, v = line.split(" = ")
                text_vals[k] = v
        obj = json.loads(js)
        csv_lines = csvtext.splitlines()
        csv_vals = dict(zip(csv_lines[1].split(","), csv_lines[2].split(",")))

        for key in ("x_star", "density_cross_lo", "density_cross_hi"):
            assert text_vals[key] == csv_vals[key]
            # json parses back to the same double, and the shared formatter
            # reproduces the same shortest string
            assert fmt(obj[key]) == text_vals[key]

    def test_json_floats_roundtrip_losslessly(self, capsys):
        _, js, _ = run(
            capsys, "compare", "--n", "2", "--m", "1", "--a1", "1", "--a2", "2",
            "--format", "json",
        )
        obj = json.loads(js)
        again = json.loads(json.dumps(obj))
        assert again["x_star"] == obj["x_star"]
        assert again["density_cross_lo"] == obj["density_cross_lo"]


class TestOutFlag:
    def test_out_file_matches_stdout_bytes(self, capsys, tmp_path):
        target = tmp_path / "report.txt"
        argv = ["compare", "--n", "1", "--m", "1", "--a1", "1", "--a2", "2"]
        code, out, _ = run(capsys, *argv)
        code2, out2, _ = run(capsys, *argv, "--out", str(target))
        assert code == code2 == 0
        assert out2 == ""  # everything went to the file
        assert target.read_text() == out

    def test_out_dash_means_stdout(self, capsys):
        argv = ["xstar", "--m", "1", "--n-range", "1:1:1", "--a1", "1", "--a2", "2"]
        _, out, _ = run(capsys, *argv, "--out", "-")
        assert out.splitlines()[1] == "n,x_star"


class TestPlot:
    PNG_MAGIC = b"\x89PNG\r\n"

    def test_compare_plot_writes_png(self, capsys, tmp_path):
        fig = tmp_path / "bunching.png"
        code, out, _ = run(
            capsys, "compare", "--n", "1", "--m", "1", "--a1", "1", "--a2", "2",
            "--plot", str(fig),
        )
        assert code == 0
        assert out != ""  # the table still goes to stdout
        assert fig.read_bytes()[:6] == self.PNG_MAGIC

    def test_conjecture_plot_with_mc_overlay(self, capsys, tmp_path, monkeypatch):
        monkeypatch.delenv("BUNCHKIT_SEED", raising=False)
        fig = tmp_path / "scan.png"
        code, _, _ = run(
            capsys, "conjecture", "--n", "2", "--m", "1", "--a-range", "1:2:1",
            "--mc-samples", "500", "--plot", str(fig),
        )
        assert code == 0
        assert fig.read_bytes()[:6] == self.PNG_MAGIC


class TestSeeding:
    ARGS = ["conjecture", "--n", "2", "--m", "1", "--a-range", "1:2:1",
            "--mc-samples", "2000"]

    def test_default_seed_echoed_in_header(self, capsys, monkeypatch):
        monkeypatch.delenv("BUNCHKIT_SEED", raising=False)
        _, out, _ = run(capsys, *self.ARGS)
        assert " seed=12345" in out.splitlines()[0]

    def test_no_seed_token_without_mc(self, capsys, monkeypatch):
        monkeypatch.setenv("BUNCHKIT_SEED", "777")
        _, out, _ = run(capsys, "conjecture", "--n", "2", "--m", "1", "--a-range", "1:2:1")
        assert "seed=" not in out

    def test_env_seed_changes_estimates_not_exact_column(self, capsys, monkeypatch):
        monkeypatch.delenv("BUNCHKIT_SEED", raising=False)
        _, out_a, _ = run(capsys, *self.ARGS)
        monkeypatch.setenv("BUNCHKIT_SEED", "777")
        _, out_b, _ = run(capsys, *self.ARGS)
        assert " seed=777" in out_b.splitlines()[0]
        rows_a = [l.split(",") for l in out_a.splitlines() if "," in l and not l.startswith("#")][1:]
        rows_b = [l.split(",") for l in out_b.splitlines() if "," in l and not l.startswith("#")][1:]
        exact_a = [r[1] for r in rows_a]
        exact_b = [r[1] for r in rows_b]
        mc_a = [r[2] for r in rows_a]
        mc_b = [r[2] for r in rows_b]
        assert exact_a == exact_b
        assert mc_a != mc_b

    def test_same_seed_is_byte_deterministic(self, capsys, monkeypatch):
        monkeypatch.setenv("BUNCHKIT_SEED", "99")
        _, out_a, _ = run(capsys, *self.ARGS)
        _, out_b, _ = run(capsys, *self.ARGS)
        assert out_a == out_b

    def test_bad_seed_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("BUNCHKIT_SEED", "abc")
        code, _, err = run(capsys, *self.ARGS)
        assert code == 1
        assert "BUNCHKIT_SEED" in err


class TestExitCodes:
    def test_success_is_zero(self, capsys):
        code, _, _ = run(capsys, "xstar", "--m", "1", "--n-range", "1:1:1",
                         "--a1", "1", "--a2", "2")
        assert code == 0

    def test_missing_required_flag(self, capsys):
        code, _, err = run(capsys, "compare", "--n", "1", "--m", "1", "--a1", "1")
        assert code == 1
        assert "error:" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 1
        assert "error:" in err

    @pytest.mark.parametrize("spec", ["1:2", "2:1:0.5", "1:2:-1", "1:2:0", "a:b:c"])
    def test_malformed_range(self, capsys, spec):
        code, _, err = run(capsys, "xstar", "--m", "1", "--n-range", spec,
                           "--a1", "1", "--a2", "2")
        assert code == 1
        assert "range" in err

    def test_equal_a_names_degenerate_params(self, capsys):
        code, _, err = run(capsys, "compare", "--n", "1", "--m", "1",
                           "--a1", "2", "--a2", "2")
        assert code == 1
        assert "DegenerateParams" in err

    def test_conjecture_needs_n_greater_than_m(self, capsys):
        code, _, err = run(capsys, "conjecture", "--n", "1", "--m", "2",
                           "--a-range", "1:2:1")
        assert code == 1
        assert "DomainError" in err

    def test_verification_failure_exits_two(self, capsys, monkeypatch):
        # no valid parameter pair fails verification, so fake one failing
        report = BunchingReport(
            a1=1.0, a2=2.0, n=1.0, m=1.0,
            x_star=0.5, density_cross_lo=0.2, density_cross_hi=0.8,
            grid_size=64, verified=False,
            icv_conclusion=IcvConclusion.INCONCLUSIVE,
        )
        monkeypatch.setattr(cli, "verify_bunching", lambda *a, **k: report)
        code, out, _ = run(capsys, "compare", "--n", "1", "--m", "1",
                           "--a1", "1", "--a2", "2")
        assert code == 2
        assert "verified = false" in out

    def test_fit_partial_failure_exits_three(self, capsys, tmp_path):
        good = synth_csv_rows(2000, 2.0, 3.0)
        # second year has most of its mass in the open top bin, so the
        # median-pinned scale cannot be interpolated
        bad = ["2001,0,15,5", "2001,15,25,5", "2001,25,,90"]
        path = write_income_csv(tmp_path / "mixed.csv", good + bad)
        code, out, _ = run(capsys, "fit", path, "--scale", "62")
        assert code == 0  # provided scale works for both years
        code, out, _ = run(capsys, "fit", path, "--scale", "median")
        assert code == 3
        assert "false" in out

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "fit", str(tmp_path / "nope.csv"))
        assert code == 1
        assert "error:" in err

    def test_parse_error_reports_line_number(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text(
            "year,bin_lower_kusd,bin_upper_kusd,percent\n"
            "2000,0,15,10\n"
            "2000,15,25,not_a_number\n"
        )
        code, _, err = run(capsys, "fit", str(path))
        assert code == 1
        assert "line 3" in err

    def test_help_exits_zero(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "compare" in out


class TestFitCommand:
    def test_two_year_table_and_verdict(self, capsys, tmp_path):
        # same xi = 0.4, a rises 5 -> 6: second year is more bunched
        rows = synth_csv_rows(2000, 2.0, 3.0) + synth_csv_rows(2001, 2.4, 3.6)
        path = write_income_csv(tmp_path / "two.csv", rows)
        code, out, _ = run(capsys, "fit", path, "--scale", "62")
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "year,scale_b,gamma,alpha,beta,xi,a,chi_square,iterations,converged,note"
        assert "# compare 2000->2001: year2_more_bunched" in lines
        year_rows = [l.split(",") for l in lines[2:4]]
        assert [r[0] for r in year_rows] == ["2000", "2001"]
        for r, a_true in zip(year_rows, (5.0, 6.0)):
            assert abs(float(r[5]) - 0.4) <= 0.4 * 0.02
            assert abs(float(r[6]) - a_true) <= a_true * 0.02
            assert r[9] == "true"

    def test_fit_json_shape(self, capsys, tmp_path):
        rows = synth_csv_rows(2000, 2.0, 3.0) + synth_csv_rows(2001, 2.4, 3.6)
        path = write_income_csv(tmp_path / "two.csv", rows)
        code, out, _ = run(capsys, "fit", path, "--scale", "62", "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert [y["year"] for y in obj["years"]] == [2000, 2001]
        assert obj["comparisons"] == [
            {"year1": 2000, "year2": 2001, "verdict": "year2_more_bunched"}
        ]
        assert all(y["converged"] for y in obj["years"])


class TestTrendCommand:
    def test_stdout_csv_with_dash(self, capsys, tmp_path):
        rows = synth_csv_rows(2000, 2.5, 2.5, median=True)
        path = write_income_csv(tmp_path / "one.csv", rows, median_col=True)
        code, out, _ = run(capsys, "trend", path, "--out", "-")
        assert code == 0
        assert out.splitlines()[0] == (
            "year,a_hat,xi_hat,neg_a,gini_model,gini_official,chi_square,converged"
        )

    def test_file_output_and_summary(self, capsys, tmp_path):
        rows = synth_csv_rows(2000, 2.5, 2.5, median=True) + synth_csv_rows(
            2001, 3.0, 3.0, median=True
        )
        src = write_income_csv(tmp_path / "years.csv", rows, median_col=True)
        dst = tmp_path / "trend.csv"
        official = tmp_path / "gini.csv"
        official.write_text("year,gini\n2000,0.39\n2001,0.36\n")
        fig = tmp_path / "trend.png"
        code, out, _ = run(
            capsys, "trend", src, "--out", str(dst),
            "--gini-official", str(official), "--plot", str(fig),
        )
        assert code == 0
        body = dst.read_text().splitlines()
        assert body[0].startswith("year,a_hat")
        assert body[1].split(",")[0] == "2000"
        assert body[1].split(",")[5] == "0.39"  # official gini merged in
        assert "# trend input=" in out
        assert "2000->2001:" in out
        assert f"wrote {dst} (2 years, 2 converged)" in out
        assert fig.read_bytes()[:6] == b"\x89PNG\r\n"

    def test_partial_trend_exits_three(self, capsys, tmp_path):
        rows = synth_csv_rows(2000, 2.5, 2.5, median=True)
        bad = ["2001,0,15,5,", "2001,15,25,5,", "2001,25,,90,"]
        src = write_income_csv(tmp_path / "mixed.csv", rows + bad, median_col=True)
        dst = tmp_path / "trend.csv"
        code, out, _ = run(capsys, "trend", src, "--out", str(dst))
        assert code == 3
        assert "(2 years, 1 converged)" in out
        nan_row = dst.read_text().splitlines()[2]
        assert nan_row.startswith("2001,nan")
