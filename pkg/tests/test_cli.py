import json

from shadowsim.benchmarks import benchmark_path
from shadowsim.cli import main
from shadowsim.protocol import record_from_line


def test_run_writes_log_with_tick_count_contract(tmp_path, capsys):
    out = tmp_path / "log.jsonl"
    code = main(["run", str(benchmark_path("near_pass")), "--out", str(out)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == summary["ticks"] == 120  # duration_s * tick_rate
    first = record_from_line(lines[0])
    assert first.k == 0


def test_missing_scenario_exits_one(tmp_path, capsys):
    code = main(["run", str(tmp_path / "missing.json")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_invalid_scenario_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"frame": {"l_w": -1.0}}), encoding="utf-8")
    assert main(["run", str(bad)]) == 1


def test_compare_reports_paired_metrics(tmp_path, capsys):
    out = tmp_path / "log.jsonl"
    code = main(["run", str(benchmark_path("near_pass")), "--compare", "--out", str(out)])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["pid"]["max_dalpha"] < summary["direct"]["max_dalpha"]
    assert (tmp_path / "log.direct.jsonl").exists()
    assert (tmp_path / "log.pid.jsonl").exists()


def test_repeated_runs_write_identical_bytes(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert main(["run", str(benchmark_path("near_pass")), "--out", str(a)]) == 0
    assert main(["run", str(benchmark_path("near_pass")), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
