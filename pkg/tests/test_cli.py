import csv
import io
import subprocess
import sys

import pytest

from bernoulli_opmat.cli import EXIT_OK, EXIT_SOLVER, EXIT_USAGE, PRECISION_ENV, main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_list():
    code, out, _ = run("list")
    assert code == EXIT_OK
    assert [line.split()[0] for line in out.splitlines()] == ["bessel0", "lane-emden", "riccati-tanh", "riccati-erf"]


def test_run_bessel_prints_table_value():
    code, out, _ = run("run", "bessel0", "--n", "10")
    assert code == EXIT_OK
    last_row = [line for line in out.splitlines() if line.strip().startswith("1.0")][0]
    assert "0.7651976866" in last_row


def test_run_erf_n2_rms():
    code, out, _ = run("run", "riccati-erf", "--n", "2")
    rms = float(out.split("RMS (101 points): ")[1].split()[0])
    assert 3.0751e-4 <= rms <= 3.0751e-2


def test_run_lane_emden_exact_mode():
    code, out, _ = run("run", "lane-emden", "--n", "6", "--exact-mode")
    assert code == EXIT_OK
    assert "residual: exactly zero" in out


def test_newton_iterations_reported():
    _, out, _ = run("run", "riccati-tanh", "--n", "6")
    assert "Newton iterations:" in out


def test_precision_env(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "4")
    _, out, _ = run("run", "bessel0", "--n", "10")
    assert " 0.7652 " in out


def test_bad_precision_env(monkeypatch):
    monkeypatch.setenv(PRECISION_ENV, "many")
    code, _, err = run("run", "bessel0")
    assert code == EXIT_USAGE and PRECISION_ENV in err


def test_csv_round_trip(tmp_path):
    path = tmp_path / "errors.csv"
    code, _, _ = run("run", "riccati-tanh", "--n", "8", "--rms-points", "11", "--out-csv", str(path))
    assert code == EXIT_OK
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert rows[0] == ["x", "approx", "exact", "abs_error"]
    assert len(rows) == 12
    for x_s, approx_s, exact_s, err_s in rows[1:]:
        approx, exact_v, err = float(approx_s), float(exact_s), float(err_s)
        assert f"{approx:.15g}" == approx_s
        # approx and exact are each rounded to 15 digits before differencing
        assert err == pytest.approx(abs(approx - exact_v), abs=1e-14)


def test_coeffs_csv(tmp_path):
    code, out, _ = run("coeffs", "lane-emden", "--n-list", "6")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["N", "i", "abs_coeff"]
    assert [r[:2] for r in rows[1:]] == [["6", str(i)] for i in range(7)]
    assert all(float(r[2]) <= 1e-12 for r in rows[4:])


def test_coeffs_n2_three_rows():
    _, out, _ = run("coeffs", "bessel0", "--n-list", "2")
    assert len(out.splitlines()) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ("run", "bessel0", "--n", "25"),
        ("run", "bessel0", "--n", "ten"),
        ("coeffs", "bessel0", "--n-list", "4,x"),
        ("frobnicate",),
        ("run", "no-such-thing"),
        ("coeffs", "airy"),
        ("run", "lane-emden", "--n", "4"),
    ],
)
def test_usage_errors(argv, capsys):
    code, _, _ = run(*argv)
    assert code == EXIT_USAGE


PROBLEM = """\
order = 1
coeff_polys = [[-2], [1]]
quad_poly = [1]
rhs_poly = [1]
init_conditions = [0]
N = 10
"""


def test_run_problem_file(tmp_path):
    path = tmp_path / "tanh.txt"
    path.write_text(PROBLEM, encoding="utf-8")
    code, out, _ = run("run", str(path))
    assert code == EXIT_OK
    assert "tanh.txt  N=10" in out
    assert "0.2419768508" in out


def test_bad_problem_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(PROBLEM.replace("N = 10", "N = ten"), encoding="utf-8")
    code, _, err = run("run", str(path))
    assert code == EXIT_USAGE
    assert f"{path}:6 [N]" in err


def test_solver_failure_exit_code_and_no_csv(tmp_path):
    path = tmp_path / "singular.txt"
    path.write_text(PROBLEM.replace("[[-2], [1]]", "[[0], [0]]").replace("quad_poly = [1]\n", ""), encoding="utf-8")
    out_csv = tmp_path / "out.csv"
    code, _, err = run("run", str(path), "--out-csv", str(out_csv))
    assert code == EXIT_SOLVER
    assert "solver failure" in err
    assert not out_csv.exists()


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bernoulli_opmat", "run", "bessel0", "--n", "8"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "0.9603982267" in proc.stdout


def test_reference_rms_shown_when_known():
    _, out, _ = run("run", "riccati-erf", "--n", "2")
    assert "reference RMS:     3.0751e-03" in out
    _, out, _ = run("run", "riccati-erf", "--n", "3")
    assert "reference RMS" not in out
