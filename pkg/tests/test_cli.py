import json
import subprocess
import sys

import pytest

from cyclehub import bench
from cyclehub.cli import main
from cyclehub.instance import read_instance, validate_instance


def run(*args, cwd=None):
    proc = subprocess.run([sys.executable, "-m", "cyclehub", *args], capture_output=True, text=True, cwd=cwd)
    return proc.returncode, proc.stdout, proc.stderr


def test_generate(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["generate", "--hubs", "4", "--nonhubs", "3", "--seed", "9", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert validate_instance(read_instance(a)) == []
    code, _, err = run("generate", "--hubs", "2", "--nonhubs", "3", "--out", str(tmp_path / "c.json"))
    assert code == 1 and "usage" in err
    assert main(["generate", "--hubs", "3", "--nonhubs", "2", "--out", str(tmp_path / "no" / "x.json")]) == 1


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "inst.json"
    main(["generate", "--hubs", "4", "--nonhubs", "4", "--seed", "2", "--out", str(path)])
    return path


def test_solve_methods(instance_file, capsys):
    rows = {}
    for method in bench.METHODS:
        assert main(["solve", str(instance_file), "--method", method]) == 0
        rows[method] = json.loads(capsys.readouterr().out)
    assert rows["exact"]["ratio_vs_exact"] == 1.0
    assert rows["algorithm4"]["within_guarantee"] is True
    assert rows["algorithm4"]["assignment"] and min(rows["algorithm4"]["assignment"]) >= 1
    assert "cost" not in rows["lp"] and rows["lp"]["lp_value"] is not None
    assert rows["lp"]["lp_value"] <= rows["exact"]["exact_cost"] + 1e-9


def test_solve_errors(tmp_path, instance_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["solve", str(bad), "--method", "exact"]) == 1
    assert main(["solve", str(instance_file), "--method", "exact", "--budget", "10"]) == 1
    code, _, _ = run("solve", str(instance_file), "--method", "nope")
    assert code == 1


def test_solve_violation_exit_code(instance_file, capsys, monkeypatch):
    # a harness-level fault: pretend the bound is tighter than any feasible answer
    import cyclehub.solvers as solvers

    monkeypatch.setattr(solvers, "cycle_guarantee", lambda h: 0.5)
    assert main(["solve", str(instance_file), "--method", "algorithm4"]) == 2
    assert json.loads(capsys.readouterr().out)["within_guarantee"] is False


def test_verify(capsys):
    assert main(["verify", "--hubs-min", "3", "--hubs-max", "6", "--trials", "30", "--seed", "1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 4 and all(line.startswith("PASS") for line in out)
    assert main(["verify", "--trials", "10", "--inject-fault"]) != 0
    code, _, _ = run("verify", "--trials", "0")
    assert code == 1


def test_bench(tmp_path):
    cfg = {"hubs": {"min": 3, "max": 5}, "nonhubs": [3, 4, 5], "instances": 20, "seed": 5,
           "output": str(tmp_path / "r1.jsonl")}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    code, out, _ = run("bench", str(cfg_path))
    assert code == 0, out
    assert "max_ratio" in out
    rows = bench.read_rows(tmp_path / "r1.jsonl")
    assert len(rows) == 9 * 20 * 5
    assert all(r["within_guarantee"] for r in rows if r.get("exact_cost") is not None)
    assert all(json.loads(json.dumps(r)) == r for r in rows)
    code, _, _ = run("bench", str(cfg_path), "--out", str(tmp_path / "r2.jsonl"))
    assert code == 0
    assert (tmp_path / "r1.jsonl").read_bytes() == (tmp_path / "r2.jsonl").read_bytes()


def test_bench_workers_preserve_order(tmp_path):
    base = dict(hubs=[3, 4], nonhubs=[3], instances=3, methods=["exact", "algorithm4"], seed=1)
    serial = bench.run_bench(bench.ExperimentConfig(**base))
    parallel = bench.run_bench(bench.ExperimentConfig(**base, workers=2))
    assert bench.dump_rows(serial) == bench.dump_rows(parallel)


def test_bench_config_validation(tmp_path):
    with pytest.raises(ValueError):
        bench.ExperimentConfig(hubs=[2], nonhubs=[3], instances=1)
    with pytest.raises(ValueError):
        bench.ExperimentConfig(hubs=[3], nonhubs=[3], instances=1, methods=["magic"])
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"hubs": [3], "nonhubs": [3], "instances": 1, "color": "red"}))
    with pytest.raises(ValueError, match="unknown config keys"):
        bench.load_config(path)


def test_bench_records_row_errors():
    cfg = bench.ExperimentConfig(hubs=[6], nonhubs=[9], instances=1, methods=["exact"], exact_budget=10)
    rows = bench.run_bench(cfg)
    assert len(rows) == 1 and "BudgetExceeded" in rows[0]["error"]
    summary = bench.summarize(rows)
    assert summary[0]["errors"] == 1


def test_bench_budget_only_fails_exact_row():
    cfg = bench.ExperimentConfig(hubs=[6], nonhubs=[9], instances=1, methods=["lp", "exact", "algorithm4"],
                                 exact_budget=10)
    rows = bench.run_bench(cfg)
    assert [r["method"] for r in rows] == ["lp", "exact", "algorithm4"]
    assert "BudgetExceeded" in rows[1]["error"]
    assert "error" not in rows[0] and "error" not in rows[2]
    assert rows[2]["exact_cost"] is None and rows[2]["cost"] > 0
