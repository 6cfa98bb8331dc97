import csv
import json

import pytest

from nads import __version__, cli
from nads.errors import ConfigError

SIGMA_BALL_0 = [{"word": "0"}, 0.5]
SIGMA_BALL_1 = [{"word": "1"}, 0.5]


def _config(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def _run(tmp_path, cfg, *extra):
    out = tmp_path / "report.json"
    code = cli.main(["--config", _config(tmp_path, cfg), "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_list_and_version(capsys):
    assert cli.main(["--list"]) == 0
    assert "full-shift" in capsys.readouterr().out
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0 and __version__ in capsys.readouterr().out


def test_a_mode_is_required():
    with pytest.raises(SystemExit) as info:
        cli.main(["--seed", "1"])
    assert info.value.code == 2


def test_seed_is_mandatory(tmp_path, capsys):
    code, _ = _run(tmp_path, {"system": "full-shift", "experiment": "property-check", "params": {"property": "mixing"}})
    assert code == 1 and "$.seed" in capsys.readouterr().err


def test_seed_flag_overrides_config(tmp_path):
    cfg = {"system": "tent-map", "experiment": "property-check", "seed": 1, "params": {"property": "mixing", "eps": 0.1, "horizon": 16}}
    code, report = _run(tmp_path, cfg, "--seed", "99")
    assert code == 0 and report["seed"] == 99


def test_seed_range(tmp_path, capsys):
    cfg = {"system": "tent-map", "experiment": "property-check", "params": {"property": "mixing"}}
    assert cli.main(["--config", _config(tmp_path, cfg), "--seed", str(2**64)]) == 1
    assert "--seed" in capsys.readouterr().err


def test_system_flag_overrides_config(tmp_path):
    cfg = {"system": "identity-interval", "experiment": "property-check", "seed": 0,
           "params": {"property": "mixing", "eps": 0.5, "horizon": 30}}
    code, report = _run(tmp_path, cfg, "--system", "full-shift")
    assert code == 0 and report["system"]["id"] == "full-shift"


@pytest.mark.parametrize(
    "text, needle",
    [
        ("{not json", "invalid JSON"),
        (json.dumps({"system": "full-shift", "experiment": "nope", "seed": 0}), "$.experiment"),
        (json.dumps({"system": "full-shift", "experiment": "qsp", "seed": 0, "extra": 1}), "$"),
        (json.dumps({"system": "full-shift", "experiment": "qsp", "seed": 0, "params": {"x1": {"word": "0"}}}), "$.params.x2"),
        (json.dumps({"experiment": "qsp", "seed": 0}), "$.system"),
        (json.dumps({"system": {"kind": "periodic"}, "experiment": "qsp", "seed": 0}), "$.system"),
        (json.dumps({"system": "full-shift", "experiment": "property-check", "seed": 0, "params": {"property": "calm"}}),
         "$.params.property"),
    ],
)
def test_config_errors_name_the_field(tmp_path, capsys, text, needle):
    p = tmp_path / "bad.json"
    p.write_text(text)
    assert cli.main(["--config", str(p)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("config error") and needle in err


def test_missing_file(capsys):
    assert cli.main(["--config", "/nonexistent/cfg.json"]) == 1
    assert "error" in capsys.readouterr().err


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("NADS_THREADS", "3")
    assert cli._threads(None) == 3
    assert cli._threads(2) == 2
    monkeypatch.setenv("NADS_THREADS", "many")
    with pytest.raises(ConfigError):
        cli._threads(None)
    monkeypatch.delenv("NADS_THREADS")
    assert cli._threads(None) == 1


def test_threads_do_not_change_the_report(tmp_path, monkeypatch):
    cfg = {"system": "full-shift", "experiment": "property-check", "seed": 5, "params": {"property": "mixing", "horizon": 20}}
    _, one = _run(tmp_path, cfg, "--threads", "1")
    monkeypatch.setenv("NADS_THREADS", "4")
    _, four = _run(tmp_path, cfg)
    assert one["result"] == four["result"]


def test_verify_round_trip_and_tamper(tmp_path, capsys):
    cfg = {"system": "full-shift", "experiment": "ssp", "seed": 0,
           "params": {"segments": [[0, 1], [8, 9]], "targets": [{"word": "0"}, {"word": "1"}], "eps": 0.5, "gap": 6, "period": 18}}
    code, report = _run(tmp_path, cfg)
    assert code == 0
    assert cli.main(["--verify", str(tmp_path / "report.json")]) == 0
    cert = report["result"]["certificates"][0]["certificate"]
    cert["witness"] = {"word": "1" if cert["witness"]["word"][0] == "0" else "0"}
    (tmp_path / "bad.json").write_text(json.dumps(report))
    assert cli.main(["--verify", str(tmp_path / "bad.json")]) == 1
    assert "FAILED" in capsys.readouterr().out


def test_verify_rejects_other_schema(tmp_path):
    (tmp_path / "r.json").write_text(json.dumps({"schema": 2}))
    assert cli.main(["--verify", str(tmp_path / "r.json")]) == 1


def test_repro_unknown_id():
    assert cli.main(["--repro", "nope"]) == 1


def test_repro_writes_report(tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["--repro", "tent-map", "--seed", "3", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["kind"] == "repro" and report["reproduced"] and report["seed"] == 3
    assert cli.verify(report)


def test_csv_for_certificates(tmp_path):
    cfg = {"system": "tent-map", "experiment": "wsp", "seed": 0,
           "params": {"segments": [[0, 1], [5, 6]], "targets": [0.3, 0.6], "eps": 0.05, "gap": 3}}
    trace = tmp_path / "trace.csv"
    code, _ = _run(tmp_path, cfg, "--csv", str(trace))
    assert code == 0
    rows = list(csv.DictReader(trace.open()))
    assert [int(r["j"]) for r in rows] == [0, 1, 5, 6]
    assert all(float(r["distance"]) < 0.05 for r in rows)


def test_csv_for_hit_sets(tmp_path):
    cfg = {"system": "shift-zigzag", "experiment": "hit-set", "seed": 0,
           "params": {"U": SIGMA_BALL_0, "V": SIGMA_BALL_1, "horizon": 20}}
    trace = tmp_path / "hits.csv"
    code, report = _run(tmp_path, cfg, "--csv", str(trace))
    assert code == 0
    rows = list(csv.DictReader(trace.open()))
    assert len(rows) == 20
    assert {int(r["n"]) for r in rows if r["hit"] == "1"} == set(report["result"]["hits"])


# experiment kinds that no catalog table exercises


@pytest.mark.parametrize(
    "system, params, outcome",
    [
        ("full-shift", {"property": "transitive", "horizon": 20}, "witnessed"),
        ("full-shift", {"property": "sensitive", "horizon": 20}, "witnessed"),
        ("full-shift", {"property": "wiggins", "horizon": 20}, "witnessed"),
        ("identity-interval", {"property": "sensitive", "eps": 0.05, "horizon": 20}, "refuted-at-resolution"),
    ],
)
def test_property_checks(tmp_path, system, params, outcome):
    code, report = _run(tmp_path, {"system": system, "experiment": "property-check", "seed": 2, "params": params})
    assert report["outcome"] == outcome
    assert cli.verify(report)


def test_hyperspace_and_measure_lifts(tmp_path):
    params = {"segments": [[0, 0], [8, 8]], "targets": [[{"word": "0"}, {"word": "01"}], [{"word": "1"}, {"word": "10"}]],
              "eps": 0.5, "gap": 7, "period": 18}
    for kind in ("hyperspace-lift", "measure-lift"):
        code, report = _run(tmp_path, {"system": "full-shift", "experiment": kind, "seed": 0, "params": params})
        assert code == 0 and report["result"]["certificates"][0]["level"] in ("hyperspace", "measure")
        assert cli.verify(report)


def test_inline_family(tmp_path):
    fam = {"kind": "periodic", "space": {"kind": "interval"}, "maps": [{"name": "logistic", "params": [4.0]}, {"name": "identity"}]}
    cfg = {"system": fam, "experiment": "periodicity", "seed": 0, "params": {"n": 2, "multiples": 2, "points": 10}}
    code, report = _run(tmp_path, cfg)
    assert code == 2 and report["outcome"] == "violated" and report["system"]["id"] is None


def test_periodic_sampling_is_seeded(tmp_path):
    cfg = {"system": "alternating-rotation", "experiment": "periodicity", "seed": 4, "params": {"n": 2}}
    _, a = _run(tmp_path, cfg)
    _, b = _run(tmp_path, cfg)
    assert cli.strip_timing(a) == cli.strip_timing(b)


def test_budget_exhaustion_exit_code(tmp_path):
    cfg = {"system": "alternating-inverse", "experiment": "ssp", "seed": 0, "budget": 50,
           "params": {"segments": [[0, 0], [4, 4]], "targets": [{"word": "0"}, {"word": "1"}], "eps": 0.5, "gap": 3, "period": 8}}
    code, report = _run(tmp_path, cfg)
    assert code == 3 and report["partial"] and report["params"]["budget"] == 50
