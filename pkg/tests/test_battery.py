import json

import pytest

from sflowkit.battery import PROVENANCE, get_field, list_fixtures, load_fixture, run_check, run_fixture


def test_fixture_inventory():
    names = list_fixtures()
    assert len(names) >= 20
    for n in names:
        _, expected = load_fixture(n)
        for chk in expected["checks"]:
            assert chk["provenance"] in PROVENANCE


def test_get_field():
    doc = {"a": {"b": [1, {"c": 2}]}, "xs": [{"v": 1}, {"v": 2}]}
    assert get_field(doc, "a.b[0]") == 1
    assert get_field(doc, "a.b[1].c") == 2
    assert get_field(doc, "xs[*].v") == [1, 2]
    assert run_check(doc, {"field": "a.b[5]", "equals": 1}).passed is False


def test_run_check_tolerance():
    rep = {"x": [0.2000001, 0.8], "y": -2, "z": -2}
    assert run_check(rep, {"field": "x", "equals": [0.2, 0.8], "tol": 1e-6}).passed
    assert not run_check(rep, {"field": "x", "equals": [0.2, 0.8]}).passed
    assert run_check(rep, {"field": "y", "equals_field": "z"}).passed


def test_provenance_enforced(tmp_path):
    d = tmp_path / "bad"
    d.mkdir()
    (d / "problem.json").write_text(json.dumps({"schema_version": 1, "domain": {"type": "interval"},
                                                "coefficients": {"a": "0", "b": "0", "c": "0"}}))
    (d / "expected.json").write_text(json.dumps({"checks": [{"field": "x", "equals": 1, "provenance": "DERIVED"}]}))
    with pytest.raises(ValueError):
        load_fixture("bad", tmp_path)


@pytest.mark.parametrize("name", ["zero", "szulkin_5I", "mixed_a6_c2", "rectangle_30", "xdep_sin"])
def test_selected_fixtures_pass(name):
    res = run_fixture(name)
    assert res.passed, [c.to_dict() for c in res.checks if not c.passed]
    assert any(c.name == "spectral_flow.agree" for c in res.checks)
