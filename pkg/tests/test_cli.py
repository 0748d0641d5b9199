"""End-to-end command-line behavior: flags, config files, exit codes."""
import json
import subprocess
import sys

import pytest

BASE = [sys.executable, "-m", "mite.cli"]


def run_cli(*args, cwd=None):
    return subprocess.run(
        BASE + list(args), capture_output=True, text=True, cwd=cwd
    )


TINY_RUN = [
    "run", "--model", "single_qubit", "--epsilon", "0.1",
    "--steps", "6", "--trajectories", "2", "--seed", "3",
]


class TestRunCommand:
    def test_writes_artifacts_and_reports(self, tmp_path):
        out = tmp_path / "artifacts"
        proc = run_cli(*TINY_RUN, "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert "run complete" in proc.stdout
        assert "mean final fidelity" in proc.stdout
        for name in ("trajectories.csv", "summary.csv", "corrections.txt", "run.json"):
            assert (out / name).exists()

    def test_reruns_byte_identical(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*TINY_RUN, "--out", str(a)).returncode == 0
        assert run_cli(*TINY_RUN, "--out", str(b)).returncode == 0
        for name in ("trajectories.csv", "summary.csv", "corrections.txt"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_run_json_round_trips_through_config_flag(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*TINY_RUN, "--out", str(a)).returncode == 0
        proc = run_cli("run", "--config", str(a / "run.json"), "--out", str(b))
        assert proc.returncode == 0, proc.stderr
        assert (a / "trajectories.csv").read_bytes() == (b / "trajectories.csv").read_bytes()

    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"model": "single_qubit", "steps": 6, "seed": 3,
                                   "trajectories": 2, "epsilon": 0.1}))
        out = tmp_path / "o"
        proc = run_cli("run", "--config", str(cfg), "--steps", "4", "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        assert json.loads((out / "run.json").read_text())["steps"] == 4


class TestExitCodes:
    def test_missing_model_parameters(self):
        proc = run_cli("run", "--model", "tfim", "--steps", "2", "--trajectories", "1")
        assert proc.returncode == 2
        assert "configuration error" in proc.stderr

    def test_validity_bound_violation(self):
        proc = run_cli(
            "run", "--model", "tfim", "-L", "3", "--epsilon", "0.1",
            "--steps", "2", "--trajectories", "1",
        )
        assert proc.returncode == 2
        assert "weak-measurement bound" in proc.stderr

    def test_search_without_dimension(self):
        proc = run_cli("run", "--model", "search", "--steps", "2", "--trajectories", "1")
        assert proc.returncode == 2

    def test_degenerate_model(self, tmp_path):
        proc = run_cli(
            "run", "--model", "tfim", "-L", "2", "--lambda", "0",
            "--epsilon", "0.05", "--steps", "2", "--trajectories", "1",
            "--out", str(tmp_path / "x"),
        )
        assert proc.returncode == 3
        assert "degenerate" in proc.stderr

    def test_sweep_without_variable(self):
        proc = run_cli("sweep", "--values", "0.05,0.1")
        assert proc.returncode == 2

    def test_missing_config_file(self):
        proc = run_cli("run", "--config", "/no/such/file.json")
        assert proc.returncode == 2


class TestSweepCommand:
    def test_sweep_defaults_to_search_model(self, tmp_path):
        out = tmp_path / "s"
        proc = run_cli(
            "sweep", "--sweep-var", "epsilon", "--values", "0.08,0.12",
            "--dim", "4", "--steps", "300", "--trajectories", "4",
            "--seed", "5", "--out", str(out),
        )
        assert proc.returncode == 0, proc.stderr
        assert "sweep complete" in proc.stdout
        assert (out / "sweep.csv").exists()
        result = json.loads((out / "sweep.json").read_text())
        assert result["model"] == "search"
        assert [r["value"] for r in result["rows"]] == [0.08, 0.12]

    def test_sweep_config_file(self, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "sweep_var": "epsilon", "values": [0.08, 0.12], "dimension": 4,
            "steps": 300, "trajectories": 4, "seed": 5, "threshold": 0.85,
        }))
        out = tmp_path / "s"
        proc = run_cli("sweep", "--config", str(cfg), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        result = json.loads((out / "sweep.json").read_text())
        assert result["threshold"] == 0.85


class TestVerifyCommand:
    def test_all_checks_pass(self):
        proc = run_cli("verify")
        assert proc.returncode == 0, proc.stdout + proc.stderr
        lines = [l for l in proc.stdout.splitlines() if l.startswith("PASS")]
        assert len(lines) == 7
        assert "all checks passed" in proc.stdout
        assert "FAIL" not in proc.stdout


def test_help_lists_subcommands():
    proc = run_cli("--help")
    assert proc.returncode == 0
    for word in ("run", "sweep", "verify"):
        assert word in proc.stdout
