import json
import os

import numpy as np
import pytest

from layerfem.cli import run_command


def read_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def read_csv(path):
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_solve_end_to_end(tmp_path, capsys):
    out = tmp_path / "run"
    code = run_command(
        ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "64",
         "--sigma", "1.0", "--method", "galerkin", "--out", str(out)]
    )
    assert code == 0
    header, rows = read_csv(f"{out}.csv")
    assert header == ["x", "u_exact", "u_galerkin", "err_galerkin"]
    assert len(rows) == 65

    summary = read_json(f"{out}.json")
    assert summary["command"] == "solve"
    assert summary["config"]["n_elements"] == 64
    csv_max = max(float(row[3]) for row in rows)
    assert abs(summary["linf"]["galerkin"] - csv_max) <= 1e-15
    assert summary["linf"]["galerkin"] < 1e-3

    for suffix in ("_exact.dat", "_galerkin.dat"):
        with open(f"{out}{suffix}", encoding="utf-8") as handle:
            curve = handle.read().splitlines()
        assert len(curve) == 201
        assert all(len(line.split()) == 2 for line in curve)


def test_solve_reruns_are_byte_identical(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    args = ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "32", "--method", "both"]
    assert run_command(args + ["--out", str(out_a)]) == 0
    assert run_command(args + ["--out", str(out_b)]) == 0
    with open(f"{out_a}.csv", "rb") as fa, open(f"{out_b}.csv", "rb") as fb:
        assert fa.read() == fb.read()
    summary_a = read_json(f"{out_a}.json")
    summary_b = read_json(f"{out_b}.json")
    summary_a.pop("wall_clock_seconds")
    summary_b.pop("wall_clock_seconds")
    # the config echo differs only in the output prefix
    summary_a["config"].pop("out")
    summary_b["config"].pop("out")
    assert summary_a == summary_b


def test_solve_both_methods_has_six_columns(tmp_path):
    out = tmp_path / "run"
    code = run_command(
        ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "8",
         "--method", "both", "--out", str(out)]
    )
    assert code == 0
    header, _ = read_csv(f"{out}.csv")
    assert header == ["x", "u_exact", "u_galerkin", "u_subdomain",
                      "err_galerkin", "err_subdomain"]


def test_solve_without_exact_solution(tmp_path):
    out = tmp_path / "run"
    code = run_command(
        ["solve", "--problem", "custom", "--eps", "0.5",
         "--p-expr", "1", "--q-expr", "1", "--f-expr", "exp(x)",
         "--N", "8", "--method", "galerkin", "--out", str(out)]
    )
    assert code == 0
    header, _ = read_csv(f"{out}.csv")
    assert header == ["x", "u_galerkin"]
    summary = read_json(f"{out}.json")
    assert summary["linf"] is None


def test_solve_custom_with_exact_expression(tmp_path):
    # diffusion-reaction problem with constant solution 2
    out = tmp_path / "run"
    code = run_command(
        ["solve", "--problem", "custom", "--eps", "0.3",
         "--p-expr", "0", "--q-expr", "1", "--f-expr", "2",
         "--exact-expr", "2", "--u0", "2", "--u1", "2",
         "--N", "8", "--method", "galerkin", "--out", str(out)]
    )
    assert code == 0
    summary = read_json(f"{out}.json")
    assert summary["linf"]["galerkin"] <= 1e-10


def test_sweep_end_to_end(tmp_path):
    out = tmp_path / "sweep"
    code = run_command(
        ["sweep", "--problem", "lorenz", "--eps", "0.01", "--N", "20",
         "--grid", "0.5:0.05:1.0", "--method", "both", "--out", str(out)]
    )
    assert code == 0
    header, rows = read_csv(f"{out}.csv")
    assert header == ["sigma", "linf_galerkin", "linf_subdomain"]
    assert len(rows) == 11
    summary = read_json(f"{out}.json")
    for method in ("galerkin", "subdomain"):
        uniform = float(rows[-1][header.index(f"linf_{method}")])
        assert summary["best_linf"][method] < uniform
        assert summary["best_sigma"][method] < 1.0


def test_tune_end_to_end(tmp_path):
    out = tmp_path / "tune"
    code = run_command(
        ["tune", "--problem", "lorenz", "--eps", "0.01", "--N", "20",
         "--lo", "0.5", "--hi", "1.0", "--tol", "1e-3",
         "--method", "galerkin", "--out", str(out)]
    )
    assert code == 0
    summary = read_json(f"{out}.json")
    assert 0.5 <= summary["best_sigma"]["galerkin"] <= 1.0
    header, rows = read_csv(f"{out}.csv")
    assert header == ["method", "sigma", "linf"]
    assert len(rows) >= 11


def test_converge_end_to_end(tmp_path):
    out = tmp_path / "conv"
    code = run_command(
        ["converge", "--problem", "lorenz", "--eps", "0.5",
         "--N-list", "32,64,128", "--method", "both", "--out", str(out)]
    )
    assert code == 0
    header, rows = read_csv(f"{out}.csv")
    assert header == ["N", "linf_galerkin", "order_galerkin",
                      "linf_subdomain", "order_subdomain"]
    assert rows[0][2] == ""  # no order on the coarsest row
    summary = read_json(f"{out}.json")
    assert all(o >= 1.8 for o in summary["observed_orders"]["galerkin"][1:])
    assert all(o >= 1.5 for o in summary["observed_orders"]["subdomain"][1:])


def test_verify_exits_cleanly(capsys):
    assert run_command(["verify"]) == 0
    output = capsys.readouterr().out
    assert "7/7 checks passed" in output
    assert "FAIL" not in output


def test_usage_errors(tmp_path, capsys):
    assert run_command([]) == 1
    assert run_command(["solve", "--no-such-flag"]) == 1
    assert run_command(["sweep", "--grid", "nonsense"]) == 1
    assert run_command(["solve", "--problem", "custom"]) == 1  # missing expressions
    err = capsys.readouterr().err
    for line in err.strip().splitlines():
        assert line.startswith("error: usage:")


def test_numerical_failure_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code = run_command(
        ["solve", "--problem", "custom", "--eps", "0.5",
         "--p-expr", "1", "--q-expr", "1", "--f-expr", "log(x - 2)",
         "--N", "8", "--method", "galerkin"]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error: numerical:")
    assert len(err.strip().splitlines()) == 1


def test_config_file_with_flag_precedence(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(
        "problem = lorenz\neps = 0.5\nn_elements = 8\nsigma = 0.9\n# comment\n",
        encoding="utf-8",
    )
    out = tmp_path / "run"
    code = run_command(
        ["solve", "--config", str(config), "--sigma", "1.0", "--out", str(out)]
    )
    assert code == 0
    summary = read_json(f"{out}.json")
    assert summary["config"]["sigma"] == 1.0  # flag wins
    assert summary["config"]["n_elements"] == 8  # config fills the rest


def test_config_rejects_unknown_keys(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("grid = 0.5:0.1:1.0\n", encoding="utf-8")
    assert run_command(["solve", "--config", str(config)]) == 1
    assert "grid" in capsys.readouterr().err


def test_config_empty_method_is_usage_error(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("method =\n", encoding="utf-8")
    out = tmp_path / "nothing"
    assert run_command(["solve", "--config", str(config), "--out", str(out)]) == 1
    assert not os.path.exists(f"{out}.csv")
    assert not os.path.exists(f"{out}.json")


def test_missing_config_file(capsys):
    assert run_command(["solve", "--config", "/no/such/file.cfg"]) == 1


def test_quad_order_environment_override(tmp_path, monkeypatch):
    out = tmp_path / "run"
    monkeypatch.setenv("LAYERFEM_QUAD_ORDER", "4")
    code = run_command(
        ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "8", "--out", str(out)]
    )
    assert code == 0
    assert read_json(f"{out}.json")["config"]["quad_order"] == 4

    out2 = tmp_path / "run2"
    code = run_command(
        ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "8",
         "--quad-order", "6", "--out", str(out2)]
    )
    assert code == 0
    assert read_json(f"{out2}.json")["config"]["quad_order"] == 6


def test_invalid_environment_value(monkeypatch, capsys):
    monkeypatch.setenv("LAYERFEM_QUAD_ORDER", "often")
    assert run_command(["solve", "--problem", "lorenz", "--N", "8"]) == 1
    assert "LAYERFEM_QUAD_ORDER" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run_command(["--help"]) == 0
    assert "solve" in capsys.readouterr().out


def test_plot_data_matches_spline_evaluation(tmp_path):
    out = tmp_path / "run"
    run_command(
        ["solve", "--problem", "lorenz", "--eps", "0.5", "--N", "16",
         "--samples", "41", "--out", str(out)]
    )
    with open(f"{out}_galerkin.dat", encoding="utf-8") as handle:
        rows = [line.split() for line in handle.read().splitlines()]
    xs = np.array([float(a) for a, _ in rows])
    np.testing.assert_allclose(xs, np.linspace(0.0, 1.0, 41), atol=1e-15)
    values = np.array([float(b) for _, b in rows])
    assert np.all(np.isfinite(values))
    assert abs(values[0]) <= 1e-12 and abs(values[-1]) <= 1e-12
