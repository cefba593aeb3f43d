import json
import math

import pytest

from sflowkit import config as cfgmod
from sflowkit.cli import main
from sflowkit.errors import ConfigError
from sflowkit.report import build_report, strip_timing


def _problem(tmp_path, a="5*lambda", b="0", c="5*lambda", **extra):
    doc = {"schema_version": 1, "name": "t", "domain": {"type": "interval", "length": math.pi},
           "coefficients": {"a": a, "b": b, "c": c}, "lambda_range": [0.0, 1.0], **extra}
    p = tmp_path / "problem.json"
    p.write_text(json.dumps(doc))
    return p


def test_spectrum_command(capsys):
    assert main(["spectrum", "--domain", "interval", "--length", "3.14159265358979", "--count", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [round(v, 9) for v in out["spectrum"]] == [1, 4, 9]


def test_spectrum_rectangle(tmp_path):
    out = tmp_path / "s.json"
    assert main(["spectrum", "--domain", "rectangle", "--sides", "1", "2", "--count", "2", "--out", str(out)]) == 0
    vals = json.loads(out.read_text())["spectrum"]
    assert vals == pytest.approx([1.25 * math.pi**2, 2 * math.pi**2])


def test_sflow_command(tmp_path, capsys):
    assert main(["sflow", str(_problem(tmp_path))]) == 0
    sf = json.loads(capsys.readouterr().out)["spectral_flow"]
    assert sf == {"index_formula": -2, "galerkin": -2, "crossings": -2, "agree": True}


def test_certify_exit_codes(tmp_path):
    assert main(["certify", str(_problem(tmp_path, "0", "0", "0"))]) == 2
    assert main(["certify", str(_problem(tmp_path))]) == 0
    assert main(["certify", str(_problem(tmp_path, "4*lambda", "0", "4*lambda"))]) == 1


def test_bad_config_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["index", str(bad)]) == 1
    assert "ConfigError" in capsys.readouterr().err
    assert main(["index", str(_problem(tmp_path, a="lambda*(("))]) == 1
    assert main(["index", str(tmp_path / "missing.json")]) == 1


def test_report_roundtrip_and_plots(tmp_path):
    out = tmp_path / "report.json"
    plots = tmp_path / "plots"
    prob = _problem(tmp_path, nonlinearity={"G": "-(u^4+v^4)/4"})
    assert main(["report", str(prob), "--out", str(out), "--plots-dir", str(plots), "--grid", "256"]) == 0
    rep = json.loads(out.read_text())
    cfgmod.validate(rep, "report")
    assert rep["certificate"]["direction"] == "negative"
    assert [r["confirmed"] for r in rep["probe"]["runs"]] == [True, True]
    names = sorted(p.name for p in plots.iterdir())
    assert "eigen_track.csv" in names and "kernel_1.csv" in names and "probe_1_right.csv" in names
    assert not list(tmp_path.glob(".tmp-*"))


def test_report_is_deterministic(tmp_path):
    cfg = cfgmod.load(_problem(tmp_path))
    r1, r2 = build_report(cfg, "sflow"), build_report(cfg, "sflow")
    assert cfgmod.dumps(strip_timing(r1)) == cfgmod.dumps(strip_timing(r2))


def test_force_galerkin_skips_index(tmp_path, capsys):
    assert main(["sflow", str(_problem(tmp_path)), "--force-galerkin"]) == 0
    sf = json.loads(capsys.readouterr().out)["spectral_flow"]
    assert sf["index_formula"] is None and sf["galerkin"] == sf["crossings"] == -2


def test_schema_rejects_unknown_fields():
    with pytest.raises(ConfigError):
        cfgmod.from_dict({"schema_version": 1, "domain": {"type": "interval"},
                          "coefficients": {"a": "0", "b": "0", "c": "0"}, "extra": 1})
    with pytest.raises(ConfigError):
        cfgmod.from_dict({"schema_version": 2, "domain": {"type": "interval"},
                          "coefficients": {"a": "0", "b": "0", "c": "0"}})


def test_write_atomic(tmp_path):
    p = tmp_path / "sub" / "x.json"
    cfgmod.write_atomic(p, "{}\n")
    cfgmod.write_atomic(p, '{"a": 1}\n')
    assert p.read_text() == '{"a": 1}\n' and len(list(p.parent.iterdir())) == 1


def test_battery_command(capsys):
    assert main(["battery", "szulkin_5I_long"]) == 0
    assert "1/1 fixtures passed" in capsys.readouterr().out
