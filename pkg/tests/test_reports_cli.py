from __future__ import annotations

import json
from fractions import Fraction

import pytest

from triangle_cert.cli import main
from triangle_cert.reports import (
    RunConfig,
    UsageError,
    VerificationReport,
    parse_grid,
    sample_function,
    sample_points,
    to_csv,
    to_svg,
)
from triangle_cert.results import LemmaResult, Status


def test_parse_grid():
    g = parse_grid("3.01:60:log:24")
    assert len(g) == 24 and g[0] == Fraction(301, 100) and g[-1] == 60
    assert all(a < b for a, b in zip(g, g[1:]))
    assert parse_grid("4:8:lin:3") == [4, 6, 8]
    for bad in ("3:60:log", "3:60:cubic:4", "3:60:log:0", "60:3:lin:4", "a:b:log:3"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_config_text_and_validation():
    cfg = RunConfig.from_text("# comment\nprecision_bits = 128\nseed=7\np = 4, 7/2\ntol.slack=1e-12\nsuite=boundary\n")
    assert cfg.precision_bits == 128 and cfg.seed == 7 and cfg.suite == "boundary"
    assert cfg.ps() == [4, Fraction(7, 2)] and cfg.tolerances == {"slack": 1e-12}
    cfg.validate()
    with pytest.raises(UsageError):
        RunConfig.from_text("bogus=1")
    with pytest.raises(UsageError):
        RunConfig(precision_bits=32).validate()
    with pytest.raises(UsageError):
        RunConfig(p_values=["2.5"]).validate()
    RunConfig(p_values=["2.5"]).validate(discrete=True)


def _report():
    rs = [
        LemmaResult("tek-1", Status.PASS, p=Fraction(4), witnesses={"x": Fraction(1, 3)}, elapsed_ms=1.5),
        LemmaResult("dax91", Status.INDETERMINATE, p=Fraction(5), note="stalled at 4096 bits"),
    ]
    return VerificationReport({"seed": 1}, rs, {"boundary": 12.25})


def test_report_round_trip_and_summary():
    rep = _report()
    text = rep.to_json()
    again = VerificationReport.from_json(text)
    assert again.to_json() == text
    d = json.loads(text)
    assert set(d) == {"schema", "version", "config", "results", "summary", "timing_ms"}
    assert sum(d["summary"].values()) == len(d["results"])
    assert [r["lemma_id"] for r in d["results"]] == ["dax91", "tek-1"]
    assert rep.exit_code() == 2


def test_report_deterministic_without_timing():
    a, b = _report(), _report()
    b.timing_ms["boundary"] = 99.0
    assert a.to_json(timing=False) == b.to_json(timing=False)


def test_csv_and_svg():
    rows = sample_function("H_FN", 4, sample_points(Fraction(1, 1000), Fraction(100), 5, False))
    text = to_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "s,value,error_radius" and len(lines) == 6
    assert all(float(ln.split(",")[2]) >= 0 for ln in lines[1:])
    svg = to_svg({"p=4": rows}, "h")
    assert 'viewBox="0 0 960 540"' in svg and svg.count("<polyline") == 1
    assert svg == to_svg({"p=4": rows}, "h")


def test_psi_singularity_rejected():
    with pytest.raises(UsageError, match="exclude"):
        sample_function("PSI", 4, [Fraction(1, 2), Fraction(1000001, 1000000) - Fraction(1, 10**7)])


def test_cli_plot_csv(tmp_path):
    assert main(["--out-dir", str(tmp_path), "plot", "h", "--p", "4", "--s-range", "0.001:100", "--points", "2000"]) == 0
    lines = (tmp_path / "plot-H_FN.csv").read_text().splitlines()
    assert len(lines) == 2001
    assert main(["--out-dir", str(tmp_path), "plot", "h", "--p", "4", "--points", "1"]) == 0
    assert len((tmp_path / "plot-H_FN.csv").read_text().splitlines()) == 2


def test_cli_plot_w_has_two_sign_changes(tmp_path, capsys):
    code = main(["--out-dir", str(tmp_path), "plot", "W", "--p", "4", "--s-range", "0.001:1000", "--log-x", "--points", "300"])
    assert code == 0 and "2 certified sign changes" in capsys.readouterr().out


def test_cli_plot_svg_and_psi_error(tmp_path):
    assert main(["--out-dir", str(tmp_path), "plot", "W", "--p", "4", "--p", "6", "--format", "svg", "--log-x"]) == 0
    assert (tmp_path / "plot-W_FN.svg").read_text().count("<polyline") == 2
    assert main(["--out-dir", str(tmp_path), "plot", "psi", "--p", "4", "--s-range", "0.5:2"]) == 64


def test_cli_usage_errors(tmp_path):
    assert main(["--out-dir", str(tmp_path), "verify", "--suite", "boundary", "--p-grid", "3:2:log:0"]) == 64
    with pytest.raises(SystemExit) as exc:
        main(["scan", "nonsense"])
    assert exc.value.code == 64
    assert main(["--out-dir", str(tmp_path), "verify", "--suite", "boundary", "--p", "2.5"]) == 64


def test_cli_verify_boundary_and_report(tmp_path, capsys):
    assert main(["--out-dir", str(tmp_path), "verify", "--suite", "boundary", "--p", "4"]) == 0
    out = capsys.readouterr().out
    for lemma in ("tek-1", "tex01", "P-boundary"):
        assert f"PASS          {lemma} p=4" in out
    assert main(["report", str(tmp_path / "report-verify.json")]) == 0


def test_cli_verify_appendix(tmp_path):
    assert main(["--out-dir", str(tmp_path), "verify", "--suite", "appendix"]) == 0
    d = json.loads((tmp_path / "report-verify.json").read_text())
    assert d["summary"]["fail"] == 0 and all(r["lemma_id"].startswith("appendix:") for r in d["results"])


def test_cli_reports_byte_identical(tmp_path):
    args = ["--out-dir", str(tmp_path), "--seed", "42", "--no-timing", "verify", "--suite", "endpoint", "--p", "4"]
    assert main(args) == 0
    first = (tmp_path / "report-verify.json").read_bytes()
    assert main(args) == 0
    assert (tmp_path / "report-verify.json").read_bytes() == first


def test_cli_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"suite = boundary\np = 5\nout_dir = {tmp_path}\nseed = 3\n")
    assert main(["--config", str(cfg), "verify", "--p", "4"]) == 0
    d = json.loads((tmp_path / "report-verify.json").read_text())
    assert d["config"]["p_values"] == ["4"] and d["config"]["seed"] == 3


def test_cli_counterexample(tmp_path, capsys):
    assert main(["--out-dir", str(tmp_path), "counterexample", "--p", "3", "--c", "2"]) == 0
    assert "first violating n = 4" in capsys.readouterr().out
    assert main(["--out-dir", str(tmp_path), "counterexample", "--p", "2", "--c", "2", "--n-max", "100000"]) == 0
    assert "no violation" in capsys.readouterr().out
    assert main(["--out-dir", str(tmp_path), "counterexample", "--p", "3"]) == 0
    assert "limit p' = 1.5000000000" in capsys.readouterr().out


def test_cli_scans(tmp_path, capsys):
    base = ["--out-dir", str(tmp_path)]
    assert main(base + ["scan", "sami1", "--p", "5", "--samples", "20000", "--seed", "7"]) == 0
    assert main(base + ["scan", "num1", "--n", "3", "--p", "4", "--samples", "5000"]) == 0
    assert main(base + ["scan", "num1", "--n", "5", "--p", "3", "--samples", "2000"]) == 0
    assert "diagnostic mode" in capsys.readouterr().out
    assert main(base + ["scan", "tej1", "--p", "3", "--samples", "5000"]) == 0
    assert main(base + ["scan", "cfl", "--n", "3", "--p", "4", "--samples", "200"]) == 0


def test_cli_opt(tmp_path):
    assert main(["--out-dir", str(tmp_path), "opt", "--n", "3", "--p", "4", "--b", "0.5"]) == 0
    d = json.loads((tmp_path / "report-opt.json").read_text())
    row = d["results"][0]["witnesses"]["rows"][0]
    assert abs(row["two-value"] - row["brute"]) < 1e-3
