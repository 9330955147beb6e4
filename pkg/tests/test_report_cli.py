import json

import numpy as np
import pytest

from ahv.campaigns import CAMPAIGNS, CampaignConfig, run
from ahv.cli import main
from ahv.errors import ConfigError
from ahv.report import SCHEMA, Record, Report, _plain, measured


def test_plain_conversion():
    assert _plain({"a": np.float64(1.5), "b": 2 + 3j, "c": np.array([1, 2]), "d": float("nan"),
                   "e": float("-inf"), "f": np.bool_(True)}) == \
        {"a": 1.5, "b": [2.0, 3.0], "c": [1, 2], "d": "nan", "e": "-inf", "f": True}


def test_report_summary_and_canonical_form():
    rep = Report("0", {}, [Record("b", "pass"), Record("a", "fail", values={"x": measured(0.1, 1e-3)}),
                           Record("c", "inconclusive")])
    assert rep.summary() == {"total": 3, "passed": 1, "failed": 1, "inconclusive": 1}
    d = json.loads(rep.canonical())
    assert d["schema"] == SCHEMA and d["records"][1]["values"]["x"] == {"value": 0.1, "tol": 1e-3, "cmp": "<="}
    assert rep.canonical().endswith("}\n")


def test_config_validation():
    with pytest.raises(ConfigError):
        CampaignConfig("bogus")
    with pytest.raises(ConfigError):
        CampaignConfig("type", samples=0)
    with pytest.raises(ConfigError):
        CampaignConfig("closure", family="9.9")
    with pytest.raises(ConfigError):
        CampaignConfig("closure", range_=(1.0, 1.0))
    with pytest.raises(ConfigError):
        CampaignConfig("closure", tolerances={"closure": -1.0})
    assert set(CAMPAIGNS) >= {"closure", "type", "levi", "ode", "fit"}


def test_type_campaign_passes(capsys):
    assert main(["verify", "type"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["summary"]["failed"] == 0 and out["summary"]["total"] == 10
    ids = [r["check"] for r in out["records"]]
    assert ids == sorted(ids)
    assert {e["id"] for e in out["errata"]} >= {"type:2.7-coefficient-2", "type:cubic-grouping"}


def test_failures_give_exit_one(capsys):
    assert main(["verify", "levi"]) == 1
    out = json.loads(capsys.readouterr().out)
    failed = {r["check"] for r in out["records"] if r["status"] == "fail"}
    assert failed == {"levi:2.10(alpha=0.0)", "levi:2.10(alpha=1.0)"}


@pytest.mark.parametrize("argv", [["verify", "nope"], ["verify", "type", "--samples", "0"],
                                  ["verify", "type", "--range", "1"], ["verify", "type", "--tol-type", "-1"],
                                  ["verify", "type", "--surface", "9.9"], []])
def test_bad_arguments_exit_two(argv, capsys):
    assert main(argv) == 2


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("AHV_SEED", "x")
    assert main(["verify", "type"]) == 2
    monkeypatch.setenv("AHV_SEED", "7")
    main(["verify", "type"])
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 7


def test_out_file_and_timings(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "closure", "--family", "3.1,3.2", "--samples", "5", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert [r["check"] for r in rep["records"]] == ["closure:3.1", "closure:3.2"]
    timings = json.loads((tmp_path / "r.json.timings.json").read_text())
    assert set(timings) == {"closure:3.1", "closure:3.2"}
    assert "2 checks, 2 passed" in capsys.readouterr().err


def test_tolerance_override_changes_verdict(capsys):
    assert main(["verify", "type", "--surface", "2.1", "--tol-type", "1e-30"]) in (0, 1)
    assert main(["verify", "closure", "--family", "3.1", "--samples", "3", "--tol-closure", "1e-40"]) == 1


def test_campaign_run_is_deterministic():
    cfg = CampaignConfig("closure-system", family="3.1,3.5")
    a, _ = run(cfg)
    b, _ = run(cfg)
    assert a.canonical() == b.canonical()
