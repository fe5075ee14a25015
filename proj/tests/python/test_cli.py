import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("PURE_EXPLORE_CLI")

pytestmark = pytest.mark.skipif(not CLI, reason="PURE_EXPLORE_CLI not set")


def write_config(tmp_path: Path, **overrides) -> Path:
    cfg = {
        "instance": {"family": "gaussian", "means": [0.1, 0.2, 0.3, 0.4, 0.5]},
        "query": {"kind": "best_k", "k": 2},
        "rule": {"est": "ts", "det": "kkt", "sel": "ids"},
        "mode": {"type": "fixed_confidence", "delta": 0.1, "threshold": "practical"},
        "replications": 4,
        "seed": 11,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def test_help_lists_subcommands():
    out = run("--help")
    assert out.returncode == 0
    for sub in ("solve", "run", "experiment", "convergence"):
        assert sub in out.stdout
    for flag in ("--config", "--out", "--workers", "--seed"):
        assert flag in run("experiment", "--help").stdout


def test_solve_symmetric_two_arm(tmp_path):
    cfg = write_config(
        tmp_path,
        instance={"family": "gaussian", "means": [1.0, 0.0]},
        query={"kind": "best_arm"},
    )
    out = run("solve", "--config", str(cfg))
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert abs(payload["p_star"][0] - 0.5) < 1e-9
    assert abs(payload["gamma_star"] - 0.125) < 1e-9
    assert payload["certificate"]["stationarity_residual"] <= 1e-6


def test_validation_error_exit_code(tmp_path):
    cfg = write_config(tmp_path, instance={"family": "gaussian", "means": [0.5, 0.5]},
                       query={"kind": "best_arm"})
    out = run("solve", "--config", str(cfg))
    assert out.returncode == 1
    assert "tied" in out.stderr


def test_missing_config_file_exit_code(tmp_path):
    out = run("experiment", "--config", str(tmp_path / "nope.json"))
    assert out.returncode == 2


def test_experiment_writes_files_and_reruns_identically(tmp_path):
    cfg = write_config(tmp_path)
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    r1 = run("experiment", "--config", str(cfg), "--out", str(out1), "--workers", "1")
    r2 = run("experiment", "--config", str(cfg), "--out", str(out2), "--workers", "4")
    assert r1.returncode == 0 and r2.returncode == 0
    runs1 = (out1 / "runs.csv").read_bytes()
    runs2 = (out2 / "runs.csv").read_bytes()
    assert runs1 == runs2
    summary = json.loads((out1 / "summary.json").read_text())
    assert summary == json.loads((out2 / "summary.json").read_text())
    assert summary["replications"] == 4
    assert "mean" in summary and "pcs" in summary and "q1" in summary
    assert "tau" in r1.stdout and "PCS" in r1.stdout


def test_run_writes_step_log(tmp_path):
    cfg = write_config(tmp_path, replications=1)
    out = tmp_path / "runlog"
    r = run("run", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["tau_or_T"] >= 5
    lines = (out / "step_log.csv").read_text().splitlines()
    assert lines[0] == "t,estimate_hash,pitfall,arm,glrt_value,ts_fallback"
    assert len(lines) - 1 + 5 == payload["tau_or_T"]


def test_convergence_writes_trajectory(tmp_path):
    cfg = write_config(
        tmp_path,
        mode={"type": "convergence", "budget": 500, "checkpoints": [100, 500]},
        replications=2,
    )
    out = tmp_path / "conv"
    r = run("convergence", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 0
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "replication,t,gamma_true,gamma_emp,p_1,p_2,p_3,p_4,p_5"
    assert len(lines) == 1 + 2 * 2  # two checkpoints per replication


def test_seed_override_changes_runs(tmp_path):
    cfg = write_config(tmp_path)
    out1 = tmp_path / "s1"
    out2 = tmp_path / "s2"
    run("experiment", "--config", str(cfg), "--out", str(out1), "--seed", "1")
    run("experiment", "--config", str(cfg), "--out", str(out2), "--seed", "2")
    assert (out1 / "runs.csv").read_bytes() != (out2 / "runs.csv").read_bytes()


def test_workers_env_fallback(tmp_path):
    cfg = write_config(tmp_path)
    out1 = tmp_path / "env1"
    out2 = tmp_path / "env8"
    env = dict(os.environ)
    env["PURE_EXPLORE_WORKERS"] = "1"
    r1 = subprocess.run([CLI, "experiment", "--config", str(cfg), "--out", str(out1)],
                        capture_output=True, text=True, env=env)
    env["PURE_EXPLORE_WORKERS"] = "8"
    r2 = subprocess.run([CLI, "experiment", "--config", str(cfg), "--out", str(out2)],
                        capture_output=True, text=True, env=env)
    assert r1.returncode == 0 and r2.returncode == 0
    assert (out1 / "runs.csv").read_bytes() == (out2 / "runs.csv").read_bytes()
