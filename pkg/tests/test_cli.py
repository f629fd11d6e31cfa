import json
import subprocess
import sys

import pytest

from barewire import cli, dispersion
from barewire.tables import read_csv


def run(argv):
    try:
        return cli.main(argv)
    except SystemExit as exc:
        return exc.code


def parse_solve(text):
    out = {}
    for line in text.strip().splitlines():
        k, v = line.split(": ")
        out[k] = float(v)
    return out


def test_solve_prints_solution(capsys):
    assert run(["solve", "--freq", "30e9", "--radius", "1e-3"]) == 0
    vals = parse_solve(capsys.readouterr().out)
    assert 0 < vals["alpha_db_m"] < 1
    lam = complex(vals["re_lambda_a"], vals["im_lambda_a"])
    assert dispersion.residual(lam, 30e9, dispersion.MediumParams.copper(1e-3)) < 1e-8


def test_solve_perfect_conductor(capsys):
    assert run(["solve", "--freq", "30e9", "--radius", "1e-3", "--sigma", "1e12"]) == 0
    vals = parse_solve(capsys.readouterr().out)
    assert vals["alpha_np_m"] < 1e-3
    assert abs(vals["v_ph_over_c"] - 1) < 1e-6


def test_fit_command(capsys):
    assert run(["fit", "--radius", "0.5e-3", "--band", "1e9:100e9"]) == 0
    _, rows = read_csv(capsys.readouterr().out)
    assert abs(float(rows[0]["m"]) + 0.66) < 0.05
    assert abs(float(rows[0]["q"]) - 7.66) < 0.2


def test_capacity_command(tmp_path):
    assert run(["capacity", "--radius", "10e-3", "--distance", "100", "--power", "1", "--out", str(tmp_path)]) == 0
    meta, rows = read_csv((tmp_path / "capacity_summary.csv").read_text())
    assert 0.9e12 < float(rows[0]["capacity_bps"]) < 1.2e12
    assert meta["budget"]["subchannel_width_hz"] == 1e7


def test_empty_frequency_list_is_usage_error(capsys):
    assert run(["sweep", "--radius", "1e-3", "--freqs", ""]) == 1
    assert "empty" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["solve"],
    ["solve", "--freq", "-5", "--radius", "1e-3"],
    ["sweep", "--band", "5:1"],
    ["sweep", "--band", "1e9:1e20"],
    ["tf", "--radius", "-1e-3"],
    ["tf", "--distance", "-4"],
])
def test_usage_errors_exit_one(argv, capsys):
    assert run(argv) == 1


def test_numerical_failure_exits_two(monkeypatch, capsys):
    def fail(*args, **kwargs):
        raise dispersion.ConvergenceError("no convergence", last=1j, residual=1.0, iterations=200)

    monkeypatch.setattr(dispersion, "solve_dispersion", fail)
    assert run(["solve", "--freq", "30e9"]) == 2
    assert "numerical failure" in capsys.readouterr().err


@pytest.mark.parametrize("argv,name", [
    (["sweep", "--band", "1:1e15:40", "--spacing", "log"], "sweep_a0.001.csv"),
    (["extent", "--band", "30e9:100e9:8"], "extent_a0.001.csv"),
    (["velocity", "--band", "1e9:100e9:20"], "velocity_a0.001.csv"),
    (["tf", "--band", "1e9:100e9:20", "--distance", "50"], "tf_a0.001_d50.0.csv"),
    (["ir", "--distance", "50", "--window", "raised-cosine-edge"], "ir_a0.001_d50.0.csv"),
    (["stats", "--radius", "1e-3,5e-3", "--distance", "100,200,300,400"], "stats_scatter.csv"),
])
def test_outputs_are_deterministic_and_self_describing(tmp_path, argv, name):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()
    meta, rows = read_csv((a / name).read_text())
    assert meta["command"] == argv[0]
    assert meta["solver"]["rel_tol"] == 1e-12
    assert "sigma" in meta["config"] and rows


def test_ir_metadata_records_window(tmp_path):
    assert run(["ir", "--distance", "100", "--out", str(tmp_path)]) == 0
    meta, rows = read_csv((tmp_path / "ir_a0.001_d100.0.csv").read_text())
    assert meta["window"] == "none" and meta["noise_floor_db"] == 40.0 and meta["n_fft"] >= 2 * 991
    assert list(rows[0]) == ["t_s", "amplitude"]


def test_json_format(capsys):
    assert run(["tf", "--band", "1e9:2e9:3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["metadata"]["command"] == "tf"
    assert list(doc["records"][0]) == ["freq_hz", "gain_db", "phase_rad"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "barewire", "solve", "--freq", "1e9"],
                         capture_output=True, text=True, check=True)
    assert "residual" in out.stdout
