import json

import numpy as np
import pytest

from clampedsign.cli import run
from oracles import clamped_beam_root


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_boggio(capsys):
    code, out, _ = call(capsys, "check", "--a", "0", "--lambda", "0", "--n", "128")
    assert code == 0
    assert json.loads(out)["verdict"] == "SignPreserving"


def test_n_below_four_is_invalid(capsys):
    code, _, err = call(capsys, "solve1d", "--n", "3")
    assert code == 2 and "n must be at least 4" in err


def test_unknown_flag(capsys):
    code, _, err = call(capsys, "check", "--bogus", "1")
    assert code == 2 and "usage" in err


def test_eigen_beam(capsys):
    code, out, _ = call(capsys, "eigen", "--B", "1", "--T", "0", "--dim", "1", "--n", "256")
    assert code == 0
    k4 = clamped_beam_root() ** 4
    assert abs(json.loads(out)["mu1"] - k4) / k4 <= 0.005


def test_eigen_writes_phi(capsys, tmp_path):
    path = tmp_path / "phi.csv"
    code, _, _ = call(capsys, "eigen", "--dim", "2", "--n", "32", "--phi", str(path))
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert code == 0 and data.shape == (32, 2) and np.all(data[:, 1] > 0)


def test_strict_violation(capsys):
    code, out, _ = call(capsys, "check", "--lambda", "12", "--n", "64", "--strict")
    assert code == 4 and json.loads(out)["verdict"] == "Violated"
    code, _, _ = call(capsys, "check", "--lambda", "12", "--n", "64")
    assert code == 0


def test_numerical_failure_exit_code(capsys, tmp_path):
    # the residual cannot get below 1e-15 at this load, so Newton runs out of steps
    code, _, err = call(capsys, "willmore", "--n", "64", "--T", "1", "--rhs", "const:-5", "--tol", "1e-15")
    assert code == 3 and "NoConvergence" in err


def test_output_is_deterministic(capsys):
    args = ("regionmap", "--a-min", "-1", "--a-max", "1", "--l-min", "-2", "--l-max", "2",
            "--steps", "3", "--n", "32")
    first = call(capsys, *args)[1]
    assert first == call(capsys, *args)[1]
    lines = first.splitlines()
    assert lines[0] == "a,lambda,min_green,in_theorem_region,verdict"
    assert len(lines) == 10
    assert lines[1].startswith("-1,-2,")


def test_seventeen_digits(capsys):
    _, out, _ = call(capsys, "solve1d", "--n", "4")
    x = out.splitlines()[1].split(",")[0]
    assert x == format(-0.6, ".17g")


def test_regionmap_fraction(capsys):
    code, out, _ = call(capsys, "regionmap", "--a-min", "0", "--a-max", "0", "--l-min", "1",
                        "--l-max-frac", "0.98", "--steps", "2", "--n", "32")
    rows = out.splitlines()[1:]
    assert code == 0 and float(rows[1].split(",")[1]) == pytest.approx(0.98 * np.pi ** 2 / 4)


def test_compose_dump(capsys, tmp_path):
    path = tmp_path / "c.csv"
    code, _, _ = call(capsys, "compose", "--a", "2", "--lambda", "3", "--n", "16", "--dump", str(path))
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert code == 0
    np.testing.assert_allclose(data[:, 1:], np.tile([1, 2, 3, 0, 0], (16, 1)), atol=1e-10)
    assert open(path).readline().strip() == "x,a4,a3,a2,a1,a0"


def test_factor_summary(capsys):
    code, out, _ = call(capsys, "factor", "--a", "0", "--lambda", "1", "--n", "32")
    rep = json.loads(out)
    assert code == 0 and rep["branch"] == "cos" and rep["max_ode_residual"] <= 1e-9
    code, _, _ = call(capsys, "factor", "--a", "0", "--lambda", "3", "--n", "32")
    assert code == 2


def test_solve_from_csv(capsys, tmp_path):
    x = -1 + 2 / 9 * np.arange(1, 9)
    path = tmp_path / "f.csv"
    np.savetxt(path, np.column_stack((x, np.full(8, -24.0))), delimiter=",", header="x,f", comments="")
    a = call(capsys, "solve1d", "--n", "8", "--rhs", str(path))[1]
    b = call(capsys, "solve1d", "--n", "8", "--rhs", "const:-24")[1]
    assert a == b
    np.savetxt(path, np.column_stack((x + 0.1, np.ones(8))), delimiter=",", header="x,f", comments="")
    assert call(capsys, "solve1d", "--n", "8", "--rhs", str(path))[0] == 2


def test_solveradial_and_green(capsys):
    code, out, _ = call(capsys, "solveradial", "--dim", "3", "--n", "32", "--rhs", "const:-120")
    u = np.array([float(l.split(",")[1]) for l in out.splitlines()[1:]])
    assert code == 0 and np.all(u < 0)
    code, out, _ = call(capsys, "green", "--B", "1", "--T", "1", "--rho", "0.3", "--n", "16")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 17 and len(rows[0].split(",")) == 17


def test_mems_sweep_and_bracket(capsys):
    code, out, _ = call(capsys, "mems", "--B", "1", "--T", "1", "--dim", "2", "--n", "32",
                        "--lambda", "0.2", "--lambda", "0.4", "--lambda", "100")
    rows = [l.split(",") for l in out.splitlines()]
    assert rows[0] == ["lambda", "converged", "iterations", "min_u"]
    assert [r[1] for r in rows[1:]] == ["true", "true", "false"]
    assert code == 0
    assert run(["mems", "--dim", "2", "--n", "32", "--lambda", "100", "--strict"]) == 4
    capsys.readouterr()
    code, out, _ = call(capsys, "mems", "--n", "32", "--find-lambda-star", "--tol-lambda", "1e-3")
    rep = json.loads(out)
    assert code == 0 and rep["hi"] - rep["lo"] <= 1e-3 and rep["hi"] <= rep["bound"]


def test_willmore(capsys):
    code, out, _ = call(capsys, "willmore", "--n", "32", "--rhs", "const:-1e-4")
    u = np.array([float(l.split(",")[1]) for l in out.splitlines()[1:]])
    assert code == 0 and u.size == 32 and np.all(u < 0)


def test_moreau(capsys, tmp_path):
    x = -1 + 2 / 17 * np.arange(1, 17)
    path = tmp_path / "u.csv"
    np.savetxt(path, np.column_stack((x, np.sin(3 * x) * (1 - x ** 2))), delimiter=",", header="x,u",
               comments="")
    out_csv = tmp_path / "split.csv"
    code, out, _ = call(capsys, "moreau", "--n", "16", "--input", str(path), "--out", str(out_csv))
    assert code == 0 and abs(json.loads(out)["gap"]) < 1e-8
    data = np.loadtxt(out_csv, delimiter=",", skiprows=1)
    assert np.all(data[:, 3] <= 1e-10) and np.all(data[:, 2] >= -1e-10)
    np.testing.assert_allclose(data[:, 2] + data[:, 3], data[:, 1], atol=1e-15)


def test_version(capsys):
    code, out, _ = call(capsys, "version")
    assert code == 0 and out.strip() == "0.1.0"
