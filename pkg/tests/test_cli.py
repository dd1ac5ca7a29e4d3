"""End-to-end command-line behavior: exit codes, artifacts, determinism."""

import json

import pytest

from fraclap.cli import main

SMOKE = {
    "experiment": "smoke",
    "grid": {"dimension": 1, "n": 128, "half_length": 20.0},
    "order": {"s": 0.5},
    "operator": {"kind": "spectral"},
    "nonlinearity": {"kind": "power", "exponent": 2.0},
    "reaction": {"kind": "none"},
    "solver": {"record_every": 2},
    "schedule": {"t_end": 0.1, "snapshots": [0.05, 0.1]},
    "initial": {"recipe": "gaussian", "mass": 1.0, "width": 1.0},
    "output": {"dir": "smoke"},
}


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def merged(**blocks):
    doc = {k: (dict(v) if isinstance(v, dict) else v) for k, v in SMOKE.items()}
    for key, val in blocks.items():
        if isinstance(val, dict):
            doc.setdefault(key, {}).update(val)
        else:
            doc[key] = val
    return doc


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == 64


def test_unknown_suite_is_usage_error(capsys):
    assert main(["verify", "nosuch"]) == 64


def test_missing_config_is_usage_error(tmp_path, capsys):
    assert main(["solve", "--config", str(tmp_path / "absent.json")]) == 64


def test_malformed_config_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["solve", "--config", str(path)]) == 64


def test_out_of_band_order_is_usage_error(tmp_path, capsys):
    cfg = write_config(tmp_path, merged(order={"s": 0.99}))
    assert main(["solve", "--config", cfg, "--out", str(tmp_path)]) == 64


def test_exponents_prints_table(capsys):
    assert main(["exponents", "--m", "2.0", "--s", "0.5"]) == 0
    out = capsys.readouterr().out
    assert '"alpha"' in out and '"beta"' in out
    assert "m_critical" in out


def test_operator_check_small_grid(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "grid": {"dimension": 1, "n": 512, "half_length": 50.0},
        "orders": [0.5],
    })
    code = main(["operator-check", "--config", cfg, "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "operator_check.json").read_text())
    assert report["pass"] is True
    assert len(report["verdicts"]) == 3
    out = capsys.readouterr().out
    assert out.count("PASS") == 3


def test_solve_writes_run_directory(tmp_path, capsys):
    cfg = write_config(tmp_path, SMOKE)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "out")]) == 0
    run_dir = tmp_path / "out" / "smoke"
    for name in ("diagnostics.csv", "final.csv", "summary.json",
                 "manifest.json", "snapshot_000.f64", "snapshot_000.f64.json"):
        assert (run_dir / name).exists(), name
    summary = json.loads((run_dir / "summary.json").read_text())
    assert summary["status"] == "completed"
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert manifest["outputs"][-1] == "manifest.json"
    assert "diagnostics.csv" in manifest["outputs"]


def test_solve_reruns_bit_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, SMOKE)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "b")]) == 0
    for name in ("diagnostics.csv", "final.csv", "summary.json",
                 "snapshot_000.f64", "snapshot_001.f64"):
        a = (tmp_path / "a" / "smoke" / name).read_bytes()
        b = (tmp_path / "b" / "smoke" / name).read_bytes()
        assert a == b, f"{name} differs between reruns"


def test_env_var_sets_output_root(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRACLAP_OUT", str(tmp_path / "envroot"))
    cfg = write_config(tmp_path, SMOKE)
    assert main(["solve", "--config", cfg]) == 0
    assert (tmp_path / "envroot" / "smoke" / "final.csv").exists()


def test_out_flag_beats_env_var(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FRACLAP_OUT", str(tmp_path / "envroot"))
    cfg = write_config(tmp_path, SMOKE)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "flag")]) == 0
    assert (tmp_path / "flag" / "smoke" / "final.csv").exists()
    assert not (tmp_path / "envroot").exists()


def test_blowup_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, merged(solver={"blowup_ceiling": 0.01}))
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "out")]) == 2


def test_deadlock_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, merged(solver={"dt_floor": 10.0}))
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "out")]) == 3


def test_report_renders_figures(tmp_path, capsys):
    cfg = write_config(tmp_path, SMOKE)
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "out")]) == 0
    run_dir = tmp_path / "out" / "smoke"
    assert main(["report", "--config", str(run_dir)]) == 0
    assert (run_dir / "norms.png").exists()
    assert (run_dir / "profile.png").exists()
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert "norms.png" in manifest["outputs"]
    assert manifest["outputs"][-1] == "manifest.json"


def test_report_requires_run_directory(tmp_path, capsys):
    assert main(["report", "--config", str(tmp_path)]) == 64


def test_rearrange_emits_profiles(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "grid": {"dimension": 1, "n": 128, "half_length": 10.0},
        "initial": {"recipe": "indicator", "radius": 2.0, "height": 1.0},
    })
    assert main(["rearrange", "--config", cfg, "--out", str(tmp_path / "r")]) == 0
    prof = (tmp_path / "r" / "rearranged_profile.csv").read_text().splitlines()
    cum = (tmp_path / "r" / "rearranged_cumulative.csv").read_text().splitlines()
    assert prof[0] == "radius,value"
    assert cum[0] == "radius,cumulative_mass"
    last_mass = float(cum[-1].split(",")[1])
    assert last_mass == pytest.approx(4.0, rel=0.1)


def test_verify_reports_suite(tmp_path, capsys):
    code = main(["verify", "operators", "--out", str(tmp_path)])
    assert code == 0
    report = json.loads((tmp_path / "verify_operators.json").read_text())
    assert report["suite"] == "operators"
    assert report["pass"] is True
    out = capsys.readouterr().out
    assert "suite=operators pass=True" in out
    assert "FAIL" not in out
