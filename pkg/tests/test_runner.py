import json
import math
import os

import numpy as np
import pytest

import drivenpacket as dp
from drivenpacket.cli import main as cli_main
from drivenpacket.runner import ConfigError


SMALL_DOC = {
    "grid": {"k_min": -24.0, "k_max": 24.0, "n": 256},
    "schemes": ["hamiltonian", "S1", "S2"],
    "t_end": 1.0,
    "samples": 5,
}


def test_empty_document_gives_defaults():
    cfg = dp.parse_config("")
    assert cfg.params == dp.PhysicalParams(1.0, 1.0, 1.0, 1.0)
    assert cfg.packet == dp.GaussianPacketSpec(0.0, 1.0, 0.0)
    assert (cfg.grid.k_min, cfg.grid.k_max, cfg.grid.n) == (-24.0, 24.0, 1024)
    assert cfg.schemes == ("hamiltonian", "S1", "S2", "S3")
    assert cfg.t_end == pytest.approx(2.0 * math.pi)
    assert cfg.samples == 64


def test_unknown_scheme_named_in_error():
    with pytest.raises(ConfigError, match="S4"):
        dp.parse_config(json.dumps({"schemes": ["S4"]}))


def test_unknown_keys_named_in_error():
    with pytest.raises(ConfigError, match="tend"):
        dp.parse_config(json.dumps({"tend": 3.0}))
    with pytest.raises(ConfigError, match="mass"):
        dp.parse_config(json.dumps({"params": {"mass": 2.0}}))
    with pytest.raises(ConfigError, match="kmax"):
        dp.parse_config(json.dumps({"grid": {"kmax": 10.0}}))


def test_out_of_range_values_rejected():
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"samples": 1}))
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"t_end": -1.0}))
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"dt": 0.0}))
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"schemes": []}))
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"params": {"m": -1.0}}))
    with pytest.raises(ConfigError):
        dp.parse_config(json.dumps({"variants": ["printed"]}))


def test_config_round_trip():
    doc = json.dumps({"params": {"A": 0.5}, "t_end": 3.5, "schemes": ["S1", "S3"]})
    cfg = dp.parse_config(doc)
    again = dp.parse_config(dp.serialize_config(cfg))
    assert again == cfg


def test_run_scenario_writes_three_files(tmp_path):
    doc = dict(SMALL_DOC, out_dir=str(tmp_path / "run"))
    assert dp.run_scenario(dp.parse_config(json.dumps(doc))) == 0
    names = sorted(os.listdir(tmp_path / "run"))
    assert names == ["densities.csv", "moments.csv", "summary.json"]
    with open(tmp_path / "run" / "moments.csv") as fh:
        header = fh.readline().strip()
    assert header == "t,scheme,mean_x,mean_v,sigma_x,sigma_v,norm"
    with open(tmp_path / "run" / "densities.csv") as fh:
        assert fh.readline().strip() == "t,k,scheme,density"
    summary = json.load(open(tmp_path / "run" / "summary.json"))
    assert "audit" in summary and "distances_vs_hamiltonian" in summary


def test_run_scenario_deterministic(tmp_path):
    out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (out_a, out_b):
        doc = dict(SMALL_DOC, out_dir=out)
        assert dp.run_scenario(dp.parse_config(json.dumps(doc))) == 0
    for name in ("densities.csv", "moments.csv", "summary.json"):
        with open(os.path.join(out_a, name), "rb") as fa, open(os.path.join(out_b, name), "rb") as fb:
            assert fa.read() == fb.read(), name


def test_grid_widening_warns_for_s3(tmp_path):
    doc = {
        "grid": {"k_min": -24.0, "k_max": 24.0, "n": 256},
        "schemes": ["hamiltonian", "S3"],
        "t_end": 2.0 * math.pi,
        "samples": 3,
        "out_dir": str(tmp_path / "wide"),
    }
    cfg = dp.parse_config(json.dumps(doc))
    with pytest.warns(RuntimeWarning, match="widening"):
        widened, changed = dp.ensure_grid_support(cfg, strict=False)
    assert changed
    assert widened.grid.k_max >= dp.required_k_reach(cfg)
    assert widened.grid.n == cfg.grid.n

    with pytest.warns(RuntimeWarning):
        assert dp.run_scenario(cfg) == 0
    summary = json.load(open(tmp_path / "wide" / "summary.json"))
    assert summary["grid_widened"] is True


def test_strict_mode_aborts_on_undersized_grid(tmp_path, capsys):
    doc = {
        "grid": {"k_min": -24.0, "k_max": 24.0, "n": 256},
        "schemes": ["S3"],
        "t_end": 2.0 * math.pi,
        "samples": 3,
        "out_dir": str(tmp_path / "strict"),
    }
    rc = dp.run_scenario(dp.parse_config(json.dumps(doc)), strict=True)
    assert rc != 0
    assert "grid" in capsys.readouterr().out


def test_strict_oracle_check_passes(tmp_path):
    doc = dict(SMALL_DOC, out_dir=str(tmp_path / "ok"), strict=True)
    assert dp.run_scenario(dp.parse_config(json.dumps(doc))) == 0
    summary = json.load(open(tmp_path / "ok" / "summary.json"))
    assert summary["strict_checks"]["oracle"]["l1_distance"] < 1e-5


def test_strict_zero_drive_degeneracy(tmp_path):
    doc = dict(
        SMALL_DOC,
        params={"A": 0.0},
        out_dir=str(tmp_path / "free"),
        strict=True,
    )
    assert dp.run_scenario(dp.parse_config(json.dumps(doc))) == 0
    summary = json.load(open(tmp_path / "free" / "summary.json"))
    checked = summary["strict_checks"]["zero_drive_degeneracy"]["max_distance"]
    assert all(v <= 1e-8 for v in checked.values())


def test_cli_round_trip(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(dict(SMALL_DOC, out_dir="ignored")))
    out = tmp_path / "cli_out"
    rc = cli_main(["--config", str(cfg_path), "--out-dir", str(out), "--scheme", "S1"])
    assert rc == 0
    summary = json.load(open(out / "summary.json"))
    assert summary["config"]["schemes"] == ["S1"]


def test_cli_rejects_unknown_scheme(tmp_path, capsys):
    rc = cli_main(["--scheme", "S9", "--out-dir", str(tmp_path / "x")])
    assert rc == 2
    assert "S9" in capsys.readouterr().err


def test_cli_missing_config_file(tmp_path, capsys):
    rc = cli_main(["--config", str(tmp_path / "nope.json")])
    assert rc == 2


def test_cli_out_root_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DRIVENPACKET_OUT_ROOT", str(tmp_path))
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(dict(SMALL_DOC, out_dir="nested")))
    rc = cli_main(["--config", str(cfg_path), "--scheme", "S1"])
    assert rc == 0
    assert (tmp_path / "nested" / "summary.json").exists()
