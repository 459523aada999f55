import json
from pathlib import Path

import pytest

from quivgrass import cli
from quivgrass.pipelines import RealizationReport

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


def test_realize_projective_line(capsys):
    code, out = run(capsys, "realize", DATA / "p1.json", "--q", "2,3,5")
    assert code == 0 and out["ok"]
    assert [out["per_q"][q]["grassmannian_count"] for q in ("2", "3", "5")] == [3, 4, 6]


def test_realize_cubic_and_json_out(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run(capsys, "--json-out", target, "realize", DATA / "cubic_point.json", "--q", "2,3")
    assert code == 0 and out["per_q"]["3"]["veronese"]
    assert json.loads(target.read_text()) == out


def test_grassmannian_dump(capsys):
    code, out = run(capsys, "grassmannian", DATA / "lambda3_projective_plus_simple.json", "--e", "1", "--q", "2")
    assert code == 0 and out["results"][0]["count"] == 15
    assert len(out["results"][0]["bases"]) == 15


def test_connectivity(capsys):
    code, out = run(capsys, "connectivity", DATA / "lambda3_projective_plus_simple.json", "--i", "1,4", "--q", "3")
    assert code == 0 and out["ok"] and len(out["results"]) == 2


def test_auslander(capsys):
    code, out = run(capsys, "auslander", DATA / "gamma_dual_numbers.json", DATA / "module_dual_numbers_regular.json", "--g", "1", "--q", "2,3")
    assert code == 0 and [r["count_auslander"] for r in out["results"]] == [1, 1]


def test_lemma2(capsys):
    code, out = run(capsys, "lemma2", DATA / "path_a2.json", DATA / "a2_projective_1.json", "--idem", "2", "--g", "1,0")
    assert code == 0 and out["ok"] and out["dim_ReN"] == 1


def test_budget_exit_code(capsys):
    code, out = run(capsys, "--budget", "3", "grassmannian", DATA / "lambda3_projective_plus_simple.json", "--e", "2")
    assert code == 3 and out["error"] == "budget_exceeded"


def test_mismatch_exit_code(capsys, monkeypatch):
    bad = RealizationReport({2: {"ok": False}})
    monkeypatch.setattr(cli, "verify_realization", lambda *a, **k: bad)
    code, _ = run(capsys, "realize", DATA / "p1.json")
    assert code == 2


def test_invalid_input_exit_code(capsys, tmp_path):
    code, out = run(capsys, "realize", tmp_path / "missing.json")
    assert code == 1 and out["error"] == "invalid_input"


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args([])
