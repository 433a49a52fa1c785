"""End-to-end CLI tests: exit-code taxonomy, CSV shape, byte determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

CLI = [sys.executable, "-m", "fraclode"]


def run_cli(*args):
    return subprocess.run(CLI + list(args), capture_output=True, text=True)


def write_spec(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").strip().split("\n")
    header = lines[0].split(",")
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    return header, np.array(rows)


BASIC_SPEC = {
    "A": [[-2.0]],
    "x0": [1.0],
    "t0": 0.0,
    "alpha": 1 / 3,
    "grid": {"start": 0.01, "end": 1.01, "step": 0.01},
}


def test_solve_decaying_scalar(tmp_path):
    spec = write_spec(tmp_path, "p.json", BASIC_SPEC)
    out = tmp_path / "out.csv"
    result = run_cli("solve", "--config", spec, "--out", str(out))
    assert result.returncode == 0, result.stderr
    header, rows = read_csv(out)
    assert header == ["t", "x1"]
    assert rows.shape == (101, 2)
    assert np.all(np.diff(rows[:, 1]) < 0.0)  # monotone decreasing


def test_solve_byte_identical_reruns(tmp_path):
    spec = write_spec(tmp_path, "p.json", BASIC_SPEC)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli("solve", "--config", spec, "--out", str(out1)).returncode == 0
    assert run_cli("solve", "--config", spec, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_solve_alpha_one_matches_exponential(tmp_path):
    payload = dict(BASIC_SPEC, alpha=1.0, A=[[-2.0]])
    spec = write_spec(tmp_path, "p.json", payload)
    out = tmp_path / "out.csv"
    assert run_cli("solve", "--config", spec, "--out", str(out)).returncode == 0
    _, rows = read_csv(out)
    ref = np.exp(-2.0 * rows[:, 0])
    assert np.max(np.abs(rows[:, 1] - ref)) <= 1e-10


def test_solve_schema_error_names_field(tmp_path):
    payload = {k: v for k, v in BASIC_SPEC.items() if k != "A"}
    spec = write_spec(tmp_path, "p.json", payload)
    result = run_cli("solve", "--config", spec, "--out", str(tmp_path / "o.csv"))
    assert result.returncode == 2
    assert "'A'" in result.stderr


def test_solve_bad_method_is_schema_error(tmp_path):
    spec = write_spec(tmp_path, "p.json", dict(BASIC_SPEC, method="trapezoid"))
    result = run_cli("solve", "--config", spec, "--out", str(tmp_path / "o.csv"))
    assert result.returncode == 2
    assert "method" in result.stderr


def test_solve_singular_matrix_is_solver_error(tmp_path):
    payload = dict(BASIC_SPEC, A=[[0.0, 0.0], [0.0, 1.0]], x0=[1.0, 1.0])
    spec = write_spec(tmp_path, "p.json", payload)
    result = run_cli("solve", "--config", spec, "--out", str(tmp_path / "o.csv"))
    assert result.returncode == 3
    assert "ZeroEigenvalue" in result.stderr


def test_solve_eps_ladder_path(tmp_path):
    payload = {
        "A": [[1.0, 1.0], [0.0, 1.0]],
        "B": [[0.0, 0.0], [0.0, 1.0]],
        "eps_ladder": [1e-2, 1e-3, 1e-4],
        "x0": [1.0, 1.0],
        "t0": 0.0,
        "alpha": 1.0,
        "grid": {"start": 0.1, "end": 1.5, "step": 0.05},
    }
    spec = write_spec(tmp_path, "p.json", payload)
    out = tmp_path / "out.csv"
    result = run_cli("solve", "--config", spec, "--out", str(out))
    assert result.returncode == 0, result.stderr
    _, rows = read_csv(out)
    ref = np.stack(
        [
            [math.exp(t) * (1.0 + t) + 0.0, math.exp(t)]
            for t in rows[:, 0]
        ]
    )
    # expm([[1,1],[0,1]]t) [1,1] = e^t [1+t, 1]
    assert np.max(np.abs(rows[:, 1:] - ref)) <= 1e-3


def test_solve_explicit_grid_list(tmp_path):
    payload = dict(BASIC_SPEC, grid=[0.1, 0.2, 0.5], method="simpson")
    spec = write_spec(tmp_path, "p.json", payload)
    out = tmp_path / "out.csv"
    assert run_cli("solve", "--config", spec, "--out", str(out)).returncode == 0
    _, rows = read_csv(out)
    assert rows[:, 0] == pytest.approx([0.1, 0.2, 0.5])


def test_table_replica_case(tmp_path):
    case = {
        "a": -2.0,
        "alphas": [1 / 3, 3 / 7, 199 / 203, 1999 / 2003, 1.0],
        "interval": [0.01, 1.01],
        "h": 0.01,
    }
    spec = write_spec(tmp_path, "case.json", case)
    out = tmp_path / "table.csv"
    result = run_cli("table", "--config", spec, "--out", str(out))
    assert result.returncode == 0, result.stderr
    header, rows = read_csv(out)
    assert header == ["alpha", "sup_dev", "nev"]
    assert rows.shape == (5, 3)
    # The alpha = 1 row has the smallest residual by a wide margin.
    assert rows[-1, 2] == np.min(rows[:, 2])
    assert rows[-1, 2] <= 1e-6 * rows[0, 2]
    # Determinism.
    out2 = tmp_path / "table2.csv"
    assert run_cli("table", "--config", spec, "--out", str(out2)).returncode == 0
    assert out.read_bytes() == out2.read_bytes()


def test_table_method_and_h_overrides(tmp_path):
    case = {"a": -2.0, "alphas": [1 / 3], "interval": [0.02, 0.5], "h": 0.02}
    spec = write_spec(tmp_path, "case.json", case)
    out = tmp_path / "t.csv"
    result = run_cli(
        "table", "--config", spec, "--out", str(out), "--method", "simpson", "--h", "0.01"
    )
    assert result.returncode == 0, result.stderr
    _, rows = read_csv(out)
    assert rows.shape == (1, 3)


def test_table_empty_alphas_is_schema_error(tmp_path):
    case = {"a": -2.0, "alphas": [], "interval": [0.01, 1.01], "h": 0.01}
    spec = write_spec(tmp_path, "case.json", case)
    result = run_cli("table", "--config", spec, "--out", str(tmp_path / "t.csv"))
    assert result.returncode == 2
    assert "alphas" in result.stderr


def test_mlf_values():
    result = run_cli("mlf", "1", "1", "1")
    assert result.returncode == 0
    assert float(result.stdout.strip()) == pytest.approx(math.e, rel=1e-15)
    result = run_cli("mlf", "0.5", "1", "0")
    assert float(result.stdout.strip()) == pytest.approx(1.0, rel=1e-15)
    result = run_cli("mlf", "0.5", "1", "1")
    assert float(result.stdout.strip()) == pytest.approx(
        math.exp(1.0) * math.erfc(-1.0), abs=1e-8
    )


def test_stability_exit_codes(tmp_path):
    stable = write_spec(tmp_path, "s.json", {"A": [[-2.0, 0.0], [0.0, -1.0]]})
    result = run_cli("stability", "--config", stable)
    assert result.returncode == 0
    assert result.stdout.strip() == "AsymptoticallyStable"

    unstable = write_spec(tmp_path, "u.json", {"A": [[2.0]]})
    result = run_cli("stability", "--config", unstable)
    assert result.returncode == 4
    assert result.stdout.strip() == "Unstable"

    rotation = write_spec(tmp_path, "r.json", {"A": [[0.0, 1.0], [-1.0, 0.0]]})
    result = run_cli("stability", "--config", rotation)
    assert result.returncode == 5
    assert result.stdout.strip() == "Inconclusive"


def test_invalid_json_is_schema_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    result = run_cli("solve", "--config", str(path), "--out", str(tmp_path / "o.csv"))
    assert result.returncode == 2


def test_verbose_banner(tmp_path):
    spec = write_spec(tmp_path, "p.json", BASIC_SPEC)
    result = run_cli("solve", "--config", spec, "--out", str(tmp_path / "o.csv"), "--verbose")
    assert result.returncode == 0
    assert "simpson_tol" in result.stderr
