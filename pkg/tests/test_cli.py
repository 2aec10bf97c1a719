"""End-to-end tests for the etdgt command-line tool."""

import json

import pandas as pd

from etdgt_experiments.core.config import RunConfig
from etdgt_experiments.core.errors import NonConvergence
from etdgt_experiments.core.scenario import load_scenario
from etdgt_experiments.tools import etdgt_tool
from etdgt_experiments.tools.etdgt_tool import main, resolve_scenario


def test_run_writes_traces_and_summary(tmp_path):
    code = main(
        [
            "run",
            "--scenario",
            "case1",
            "--alg",
            "etdgt",
            "--alg",
            "ddgt",
            "-K",
            "60",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    expected = (
        "case1_etdgt.csv",
        "case1_ddgt.csv",
        "case1_etdgt_allocations.csv",
        "case1_ddgt_allocations.csv",
        "case1_oracle.json",
        "case1_summary.json",
    )
    for name in expected:
        assert (tmp_path / name).is_file()

    frame = pd.read_csv(tmp_path / "case1_etdgt.csv")
    assert len(frame) == 61
    assert frame["comm_w"].is_monotonic_increasing

    allocations = pd.read_csv(tmp_path / "case1_etdgt_allocations.csv")
    assert len(allocations) == 61
    assert list(allocations.columns) == ["k"] + [f"w_{i}" for i in range(14)]

    summary = json.loads((tmp_path / "case1_summary.json").read_text())
    assert 0 < summary["comm_ratio"]["events"] < 1
    assert set(summary["algorithms"]) == {"etdgt", "ddgt"}
    assert "theorem2" in summary["bounds"]
    assert "events" in summary
    assert summary["environment"]["packages"]["numpy"]


def test_run_summary_reports_warmup_and_envelope(tmp_path):
    out = str(tmp_path)
    assert main(["run", "--scenario", "case1", "-K", "40", "--out", out]) == 0
    summary = json.loads((tmp_path / "case1_summary.json").read_text())
    theorem1 = summary["bounds"]["theorem1"]
    assert theorem1["warmup_sum"] >= 0
    assert theorem1["envelope_k"] == 40
    assert "envelope" in theorem1
    assert theorem1["envelope_algorithm"] == "etdgt"
    assert theorem1["observed_average"] > 0


def test_zero_threshold_run_matches_periodic(tmp_path):
    code = main(
        [
            "run",
            "--scenario",
            "case1",
            "--alg",
            "etdgt",
            "--alg",
            "ddgt",
            "-K",
            "80",
            "--threshold-E",
            "0",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    et = (tmp_path / "case1_etdgt.csv").read_bytes()
    dd = (tmp_path / "case1_ddgt.csv").read_bytes()
    assert et == dd


def test_bounds_prints_constants(capsys):
    assert main(["bounds", "--scenario", "case1"]) == 0
    report = json.loads(capsys.readouterr().out)
    for name in ("c0", "c5", "b1", "b4"):
        assert name in report["theorem1"]
    for name in ("d1", "d13", "h1", "h7"):
        assert name in report["theorem2"]
    certificate = report["theorem2"]["certificate"]
    assert certificate["determinant_ok"]
    assert certificate["h8"] > 0


def test_oracle_and_gen(tmp_path, capsys):
    assert main(["oracle", "--scenario", "case2", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "case2_oracle.json").read_text())
    assert abs(sum(row[0] for row in data["W_star"]) - 361.0) < 1e-8

    assert main(["gen", "--n", "10", "--seed", "2", "--out", str(tmp_path)]) == 0
    scenario = load_scenario(tmp_path / "gen10_s2.json")
    assert scenario.n == 10 and scenario.seed == 2


def test_oracle_creates_output_directory(tmp_path):
    target = tmp_path / "nested" / "oracle"
    assert main(["oracle", "--scenario", "case1", "--out", str(target)]) == 0
    assert (target / "case1_oracle.json").is_file()


def test_generated_scenario_name_uses_default_seed():
    scenario = resolve_scenario(RunConfig(gen_n=10))
    assert scenario.name == "gen10_s7"
    assert resolve_scenario(RunConfig(gen_n=10, seed=3)).name == "gen10_s3"


def test_env_prints_report(capsys):
    assert main(["env"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["packages"]["numpy"]
    assert set(report["packages"]) == {"numpy", "scipy", "pandas", "networkx"}
    assert report["float64_eps"] > 0


def test_preset_run(tmp_path):
    args = ["run", "--preset", "case1", "--alg", "ddgt", "-K", "5"]
    assert main(args + ["--out", str(tmp_path)]) == 0
    assert (tmp_path / "case1_ddgt.csv").is_file()


def test_exit_codes(tmp_path, capsys, monkeypatch):
    assert main(["run"]) == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--scenario", str(bad)]) == 2
    assert "Error:" in capsys.readouterr().err

    assert main(["oracle", "--scenario", str(tmp_path / "missing.json")]) == 2

    def stalled(scenario):
        raise NonConvergence("bisection stalled")

    monkeypatch.setattr(etdgt_tool, "solve_centralized", stalled)
    assert main(["oracle", "--scenario", "case1"]) == 3
