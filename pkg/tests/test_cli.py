import json

import pytest

from qweyl import cli
from qweyl.cli import RunConfig, main, parse_complex_list, parse_ints
from qweyl.glrep import CapacityError
from qweyl.report import Check, Report, report_render


def test_parsers():
    assert parse_ints("2,1,0") == [2, 1, 0]
    assert parse_complex_list("0.05,0.03+0.01i") == [0.05, 0.03 + 0.01j]
    assert parse_complex_list("0.02, 0.1j") == [0.02, 0.1j]


def test_rs_identity_example(capsys):
    assert main(["verify", "rs-identity", "--k", "2", "--n", "2", "--deg", "4"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("suite")
    assert "FAIL" not in out


def test_main_theorem_example(tmp_path):
    out = tmp_path / "mt.json"
    code = main(["verify", "main-theorem", "--n", "2", "--lambda", "1,0", "--h", "0.05", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["passed"] and data["suite"] == "main-theorem"
    csvs = sorted(p.name for p in tmp_path.glob("mt_*.csv"))
    assert csvs and all(name.endswith("_T1.csv") for name in csvs)
    header = (tmp_path / csvs[0]).read_text().splitlines()[0]
    assert header == "re,im,matched_re,matched_im,deviation"


def test_flatness_example():
    assert main(["verify", "flatness", "--type", "casimir", "--n", "2"]) == 0


def test_json_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "main-theorem", "--n", "2", "--lambda", "1,0", "--h", "0.05,0.03+0.01i"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 2, "n": 2, "deg": 9, "tol-spec": 1e-6}))
    out = tmp_path / "r.json"
    assert main(["verify", "howe-dims", "--config", str(cfg), "--deg", "3", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["config"]["d"] == 3


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["verify", "serre", "--config", str(cfg)]) == 2


def test_tolerance_hierarchy_is_enforced():
    assert main(["verify", "main-theorem", "--n", "2", "--tol-ode", "1e-6", "--tol-spec", "1e-6"]) == 2
    with pytest.raises(ValueError):
        RunConfig("braid", tol_ode=1e-7, tol_spec=1e-6).validate()


def test_unknown_suite_rejected_by_parser():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_failed_check_exits_one(monkeypatch, capsys):
    rep = Report("serre")
    rep.add(Check("E1E2-E2E1", "deg=1", 4, "fail", 1.0, {"entry": "x"}))
    monkeypatch.setattr(cli, "run_suite", lambda cfg: rep)
    assert main(["verify", "serre"]) == 1
    assert "see certificate: E1E2-E2E1@deg=1" in capsys.readouterr().out


def test_capacity_exits_three(monkeypatch):
    def boom(cfg):
        raise CapacityError("too big")

    monkeypatch.setattr(cli, "run_suite", boom)
    assert main(["verify", "howe-dims"]) == 3


def test_render_shapes():
    empty = report_render(Report("x")).splitlines()
    assert len(empty) == 2
    rep = Report("x")
    rep.add(Check("id", "blk", 3, "pass", 0.0))
    lines = report_render(rep).splitlines()
    assert len(lines) == 3 and " OK " in lines[2]
    rep.add(Check("id2", "blk", 3, "fail", 2.0, {"k": 1}))
    assert "see certificate: id2@blk" in report_render(rep).splitlines()[3]
