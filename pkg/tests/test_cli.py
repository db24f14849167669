"""End-to-end command runs through main(argv), in process."""

import csv
import json

import numpy as np
import pytest

from mpembasim.cli import main

WINDOW_MS = 2.3245002324500232


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def test_spectrum_prints_rates_and_the_fixed_point(capsys):
    code, out, _ = run(capsys, "spectrum", "--tau", "1.0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("exchange-generator spectrum at tau = 1 ms")
    assert len([line for line in lines if "lambda_" in line]) == 4
    assert "lambda_1 = +0.000000000" in out
    assert out.count("[coherence]") == 2
    assert out.count("[population]") == 2
    assert "-0.248161477" in out
    assert "-0.496322955" in out
    assert "fixed-point populations: 0.698164888, 0.301835112" in out


def test_spectrum_writes_an_optional_table(capsys, tmp_path):
    path = str(tmp_path / "modes.csv")
    code, _, _ = run(capsys, "spectrum", "--tau", "0.7", "--out", path)
    assert code == 0
    rows = read_csv(path)
    assert len(rows) == 4
    assert rows[0]["kind"] == "population"
    assert abs(float(rows[0]["re_per_ms"])) <= 1e-12
    slow = sorted(float(row["re_per_ms"]) for row in rows)[0]
    assert slow == pytest.approx(2.0 * sorted(
        float(row["re_per_ms"]) for row in rows
    )[1], rel=1e-9)


def test_spectrum_at_the_full_swap_fails_numerically(capsys):
    code, _, err = run(capsys, "spectrum", "--tau", str(WINDOW_MS))
    assert code == 2
    assert "numerical error" in err


def test_spectrum_past_the_window_fails_numerically(capsys):
    code, _, err = run(capsys, "spectrum", "--tau", "3.0")
    assert code == 2
    assert "numerical error" in err


def test_surface_row_count_and_passive_minimum(capsys, tmp_path):
    path = str(tmp_path / "surface.csv")
    code, out, _ = run(
        capsys, "surface", "--out", path, "--theta-steps", "5", "--tau-steps", "4"
    )
    assert code == 0
    rows = read_csv(path)
    assert len(rows) == 20
    assert f"surface: 20 rows -> {path}" in out
    # the passive arrangement sits a quarter turn in
    assert "at theta = 1.570796 rad" in out
    first_tau = rows[0]["tau_ms"]
    initial = [row for row in rows if row["tau_ms"] == first_tau]
    assert len(initial) == 5
    excesses = [float(row["delta_f_neq_khz"]) for row in initial]
    assert min(excesses) == excesses[1]
    assert all(value >= -1e-12 for value in excesses)


def test_surface_json_output(capsys, tmp_path):
    path = str(tmp_path / "surface.json")
    code, _, _ = run(
        capsys, "surface", "--out", path, "--format", "json",
        "--theta-steps", "3", "--tau-steps", "3",
    )
    assert code == 0
    with open(path, encoding="utf-8") as handle:
        payload = json.load(handle)
    assert len(payload) == 9
    assert set(payload[0]) == {"theta_rad", "tau_ms", "delta_f_neq_khz"}


def test_cooling_reports_a_persistent_crossing(capsys, tmp_path):
    path = str(tmp_path / "cooling.csv")
    code, out, _ = run(capsys, "cooling", "--out", path)
    assert code == 0
    assert "cooling: crossing detected, persistent, t_cross =" in out
    assert "cooling: plain curve enters the 0.01 kHz neighborhood at tau =" in out
    assert "cooling: mpemba curve enters the 0.01 kHz neighborhood at tau =" in out
    rows = read_csv(path)
    assert len(rows) == 64
    # transformed start pays a free-energy premium, then wins; the final
    # grid point is the full swap where both curves collapse to zero
    assert float(rows[0]["delta_f_mb_khz"]) > float(rows[0]["delta_f_plain_khz"])
    assert float(rows[-2]["delta_f_mb_khz"]) < float(rows[-2]["delta_f_plain_khz"])
    assert float(rows[-1]["delta_f_mb_khz"]) <= 1e-12


def test_cooling_with_balanced_weights_has_nothing_to_accelerate(capsys, tmp_path):
    path = str(tmp_path / "flat.csv")
    code, out, _ = run(
        capsys, "cooling", "--out", path, "--populations", "0.5,0.5",
        "--tau-steps", "16",
    )
    assert code == 0
    assert "cooling: no crossing on this grid" in out


def test_otto_distance_summary(capsys, tmp_path):
    path = str(tmp_path / "distance.csv")
    code, out, _ = run(capsys, "otto-distance", "--out", path)
    assert code == 0
    crossing_line = next(
        line for line in out.splitlines() if line.startswith("otto-distance: crossing")
    )
    t_cross = float(crossing_line.split("tau2 = ")[1].split()[0])
    assert t_cross == pytest.approx(1.4131983, abs=5e-3)
    separation_line = next(
        line for line in out.splitlines() if "maximum separation" in line
    )
    assert "at tau2 =" in separation_line
    rows = read_csv(path)
    assert len(rows) == 64
    assert float(rows[0]["dist_mb"]) > float(rows[0]["dist_plain"])


def test_otto_ratio_table_never_dips_below_one(capsys, tmp_path):
    path = str(tmp_path / "ratio.csv")
    code, out, _ = run(capsys, "otto-ratio", "--out", path)
    assert code == 0
    assert "otto-ratio: peak ratio" in out
    assert "at delta =" in out
    rows = read_csv(path)
    assert len(rows) == 40
    ratios = np.array([float(row["ratio"]) for row in rows])
    assert np.all(ratios >= 1.0 - 1e-12)
    peak = float(out.split("peak ratio ")[1].split()[0])
    assert peak == pytest.approx(ratios.max(), abs=5e-7)


def test_verify_passes_on_the_default_setup(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = [line for line in out.splitlines() if line]
    assert len(lines) == 9
    assert all(line.startswith("PASS ") for line in lines)
    for name in (
        "kraus-completeness",
        "damping-equivalence",
        "biorthonormality",
        "population-coherence-decoupling",
        "free-energy-identity",
        "spectral-propagation",
        "cycle-closure",
        "energy-balance",
        "power-ratio-floor",
    ):
        assert any(name in line for line in lines)


def test_verify_reports_a_broken_config_as_a_failure(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nu1_khz = 0.5\n", encoding="utf-8")
    code, out, _ = run(capsys, "verify", "--config", str(bad))
    assert code == 1
    assert "FAIL construction" in out


def test_unknown_config_key_is_a_config_error(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("coupling_hz = 215.1\n", encoding="utf-8")
    code, _, err = run(capsys, "spectrum", "--config", str(bad))
    assert code == 3
    assert "config error" in err


def test_missing_output_directory_is_an_io_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "cooling", "--out", str(tmp_path / "absent" / "t.csv"),
        "--tau-steps", "8",
    )
    assert code == 3
    assert "io error" in err


def test_environment_variable_supplies_the_config(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "env.cfg"
    cfg.write_text("tau_steps = 5\n", encoding="utf-8")
    monkeypatch.setenv("MPEMBA_CONFIG", str(cfg))
    path = str(tmp_path / "distance.csv")
    code, _, _ = run(capsys, "otto-distance", "--out", path)
    assert code == 0
    assert len(read_csv(path)) == 5


def test_config_flag_beats_the_environment(capsys, tmp_path, monkeypatch):
    env_cfg = tmp_path / "env.cfg"
    env_cfg.write_text("tau_steps = 5\n", encoding="utf-8")
    flag_cfg = tmp_path / "flag.cfg"
    flag_cfg.write_text("tau_steps = 7\n", encoding="utf-8")
    monkeypatch.setenv("MPEMBA_CONFIG", str(env_cfg))
    path = str(tmp_path / "distance.csv")
    code, _, _ = run(
        capsys, "otto-distance", "--config", str(flag_cfg), "--out", path
    )
    assert code == 0
    assert len(read_csv(path)) == 7


def test_malformed_populations_flag_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["cooling", "--out", "x.csv", "--populations", "0.5"])
    assert excinfo.value.code == 2
    capsys.readouterr()


def test_no_mpemba_flag_is_accepted(capsys, tmp_path):
    path = str(tmp_path / "distance.csv")
    code, _, _ = run(
        capsys, "otto-distance", "--no-mpemba", "--out", path, "--tau-steps", "8"
    )
    assert code == 0
