import csv
import numpy as np
import pytest

from zzmit.cli import main
from zzmit.cumulant import GAMMA_QUARTER_TURN


def run_cli(*argv):
    return main(list(argv))


def test_find_gamma_quarter_turn(capsys, tmp_path):
    out = tmp_path / "curve.csv"
    code = run_cli("find-gamma", "--area", "pi/4", "--out", str(out))
    assert code == 0
    printed = capsys.readouterr().out
    assert "gamma_star = 4.8097" in printed
    rows = out.read_text().splitlines()
    assert rows[0] == "gamma,cumulant"
    assert len(rows) > 700


def test_find_gamma_half_turn(capsys):
    assert run_cli("find-gamma", "--area", "pi/2") == 0
    assert "gamma_star = 2.4048" in capsys.readouterr().out


def test_find_gamma_empty_bracket_fails(capsys):
    code = run_cli("find-gamma", "--area", "pi/4", "--bracket", "0.5", "2.0")
    assert code == 1
    err = capsys.readouterr().err
    assert "scanned minimum" in err


def test_export_pulse_matches_modulated_formula(tmp_path, monkeypatch):
    monkeypatch.setenv("ZZMIT_OUT", str(tmp_path))
    code = run_cli("export-pulse", "--scenario", "isolated-x90", "--k", "4",
                   "--rate", "200", "--out", "wave.csv")
    assert code == 0
    k, om0 = 4, 1.0
    T = np.pi / (2 * om0)
    tau = T / k
    omega = GAMMA_QUARTER_TURN * k * om0
    with open(tmp_path / "wave.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) > 100
    for row in rows[:: len(rows) // 7]:
        t, v = float(row["t"]), float(row["value"])
        expect = om0 * np.sin(np.pi * t / T) ** 2 + omega * np.sin(2 * np.pi * t / tau)
        assert v == pytest.approx(expect, abs=1e-9)


def test_export_pulse_plain_scheme_is_bare_sin_squared(tmp_path, monkeypatch):
    monkeypatch.setenv("ZZMIT_OUT", str(tmp_path))
    code = run_cli("export-pulse", "--scenario", "isolated-x90", "--scheme", "dy",
                   "--rate", "100", "--out", "dy.csv")
    assert code == 0
    T = np.pi / 2
    with open(tmp_path / "dy.csv") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows[:: len(rows) // 5]:
        t, v = float(row["t"]), float(row["value"])
        assert v == pytest.approx(np.sin(np.pi * t / T) ** 2, abs=1e-9)


def test_export_pulse_zero_rate_usage_error(capsys):
    code = run_cli("export-pulse", "--scenario", "isolated-x90", "--rate", "0")
    assert code == 2
    assert "rate" in capsys.readouterr().err


def test_export_pulse_unknown_scenario(capsys):
    code = run_cli("export-pulse", "--scenario", "nope", "--rate", "10")
    assert code == 2


def test_list_scenarios(capsys):
    assert run_cli("list-scenarios") == 0
    out = capsys.readouterr().out
    for fam in ("isolated-x90", "isolated-x180", "parallel-xy-nnn",
                "parallel-xy-nn", "swap-with-singles", "parallel-swap"):
        assert fam in out


SWEEP_INI = """
[run]
scenarios = isolated-x90
schemes = zzcm, dy
k = 2
eta_min = -0.2
eta_max = 0.2
eta_count = 3
steps_per_period = 128
refine_tolerance = 1e-6
workers = 1
out = {out}
"""


def _write_cfg(tmp_path, text):
    cfg = tmp_path / "run.ini"
    cfg.write_text(text)
    return cfg


def _strip_wall(path):
    rows = path.read_text().splitlines()
    return [",".join(r.split(",")[:-1]) for r in rows]


def test_sweep_csv_schema_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    cfg = _write_cfg(tmp_path, SWEEP_INI.format(out=out1))
    assert run_cli("sweep", "--config", str(cfg)) == 0
    zz = out1 / "isolated-x90-zzcm-k2.csv"
    dy = out1 / "isolated-x90-dy.csv"
    assert zz.exists() and dy.exists()
    header = zz.read_text().splitlines()[0]
    assert header == "scenario,k,eta_ratio,fidelity,infidelity,converged,wall_ms"
    with open(zz) as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["eta_ratio"]) for r in rows] == [-0.2, 0.0, 0.2]
    assert all(r["converged"] == "1" for r in rows)
    # numeric payload is bit-reproducible (wall_ms is a measurement, exempt)
    assert run_cli("sweep", "--config", str(cfg), "--out", str(out2)) == 0
    assert _strip_wall(zz) == _strip_wall(out2 / "isolated-x90-zzcm-k2.csv")


def test_sweep_env_var_overrides_output_dir(tmp_path, monkeypatch):
    cfg = _write_cfg(tmp_path, SWEEP_INI.format(out=tmp_path / "ignored"))
    override = tmp_path / "env-dir"
    monkeypatch.setenv("ZZMIT_OUT", str(override))
    assert run_cli("sweep", "--config", str(cfg)) == 0
    assert (override / "isolated-x90-zzcm-k2.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_sweep_missing_config_usage_error(capsys, tmp_path):
    assert run_cli("sweep", "--config", str(tmp_path / "nope.ini")) == 2
    assert "config error" in capsys.readouterr().err


def test_sweep_empty_scenarios_usage_error(capsys, tmp_path):
    cfg = _write_cfg(tmp_path, "[run]\nscenarios =\n")
    assert run_cli("sweep", "--config", str(cfg)) == 2
    assert "no scenarios" in capsys.readouterr().err


def test_sweep_unknown_scenario_usage_error(tmp_path, capsys):
    cfg = _write_cfg(tmp_path, "[run]\nscenarios = warp-drive\n")
    assert run_cli("sweep", "--config", str(cfg)) == 2


def test_sweep_bad_grid_usage_error(tmp_path, capsys):
    cfg = _write_cfg(tmp_path,
                     "[run]\nscenarios = isolated-x90\neta_min = 1\neta_max = -1\n")
    assert run_cli("sweep", "--config", str(cfg)) == 2


def test_sweep_nonconvergent_points_flagged_and_nonzero_exit(tmp_path, capsys):
    text = SWEEP_INI.replace("refine_tolerance = 1e-6", "refine_tolerance = 1e-15"
                             ).format(out=tmp_path / "o") + "max_refinements = 0\n"
    cfg = _write_cfg(tmp_path, text)
    code = run_cli("sweep", "--config", str(cfg))
    assert code == 1
    with open(tmp_path / "o" / "isolated-x90-zzcm-k2.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert any(r["converged"] == "0" for r in rows)
