import io
import json

import pytest

from selab import suite
from selab.cli import main
from selab.theorems import SKIPPED, CheckReport


def run(argv, monkeypatch=None):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_omega_suite():
    code, reports = suite.run_suite("omega")
    assert code == 0
    assert [r.check for r in reports].count("omega_witness") == 1
    assert all(r.ok for r in reports)


def test_unknown_selector():
    with pytest.raises(ValueError):
        suite.run_suite("everything")
    code, _ = run(["run", "--suite", "everything"])
    assert code == 2


def test_cli_omega_suite_text():
    code, out = run(["--suite", "omega"])
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "5 reports: 5 holds, 0 fails, 0 skipped-capacity"
    assert any("omega_witness" in line for line in lines)


def test_reports_sorted_and_deterministic():
    def strip(reports):
        return [{k: v for k, v in r.to_record().items() if k != "millis"} for r in reports]

    _, a = suite.run_suite("cores", max_order=8)
    _, b = suite.run_suite("cores", max_order=8)
    assert strip(a) == strip(b)
    names = [r.check for r in a]
    assert names == sorted(names)


def test_json_and_text_outputs(tmp_path):
    js, txt = tmp_path / "r.json", tmp_path / "r.txt"
    code, out = run(["run", "--suite", "cores", "--max-order", "6", "--json", str(js), "--text", str(txt), "--jsonl"])
    assert code == 0
    doc = json.loads(js.read_text())
    assert doc["suite"] == "cores" and doc["max_order"] == 6 and doc["exit_code"] == 0
    assert len(doc["reports"]) == len(out.splitlines()) == len(txt.read_text().splitlines())
    first = json.loads(out.splitlines()[0])
    assert set(first) >= {"check", "instance", "verdict", "millis"}


def test_env_max_order(monkeypatch, tmp_path):
    js = tmp_path / "r.json"
    monkeypatch.setenv("SELAB_MAX_ORDER", "4")
    run(["run", "--suite", "cores", "--json", str(js)])
    assert json.loads(js.read_text())["max_order"] == 4
    run(["run", "--suite", "cores", "--max-order", "3", "--json", str(js)])
    assert json.loads(js.read_text())["max_order"] == 3
    monkeypatch.setenv("SELAB_MAX_ORDER", "many")
    assert run(["run", "--suite", "omega"])[0] == 2


def test_strict_capacity_exit(monkeypatch):
    skipped = CheckReport("fake", "x", SKIPPED, None, 0.0, "too big")
    monkeypatch.setattr(suite, "omega_reports", lambda seed=0: [skipped])
    assert suite.run_suite("omega")[0] == 0
    assert suite.run_suite("omega", strict=True)[0] == 3
    assert run(["run", "--suite", "omega", "--strict"])[0] == 3


def test_failure_exit(monkeypatch):
    failing = CheckReport("fake", "x", "fails", {"w": 1})
    monkeypatch.setattr(suite, "omega_reports", lambda seed=0: [failing])
    code, out = run(["run", "--suite", "omega"])
    assert code == 1 and "FAILS" in out


def test_catalog_manifest_flag(tmp_path):
    (tmp_path / "m.txt").write_text("cyclic(4)\nsymmetric(3)\n")
    code, out = run(["run", "--suite", "theorems", "--catalog", str(tmp_path / "m.txt")])
    assert code == 0 and "[S3]" in out
    (tmp_path / "bad.txt").write_text("from_table(missing.table)\n")
    assert run(["run", "--suite", "theorems", "--catalog", str(tmp_path / "bad.txt")])[0] == 2


def test_script_command(tmp_path):
    path = tmp_path / "s.selab"
    path.write_text("group G = symmetric(3)\nsub H = generate(G; (1 2))\ncore normal H\ncheck clots H\n")
    code, out = run(["script", str(path)])
    assert code == 0 and "core normal H: [0]" in out
    code, out = run(["script", str(path), "--print"])
    assert out.startswith("group G = symmetric(3)\n")
    path.write_text("sub H = generate(G; 1 2)\n")
    assert run(["script", str(path)])[0] == 2


def test_omega_command():
    code, out = run(["omega", "const{;1}", "sdelta{;0}"])
    assert code == 0
    assert "omega(sum) = {;1}" in out
    code, out = run(["omega"])
    assert code == 0 and out.startswith("HOLDS")
    assert run(["omega", "nonsense"])[0] == 2


def test_catalog_command(tmp_path):
    code, out = run(["catalog", "--max-order", "24", "--save", str(tmp_path / "m.txt")])
    assert code == 0 and out.splitlines()[-1] == "153 groups"
    code, out = run(["catalog", "--load", str(tmp_path / "m.txt")])
    assert out.splitlines()[-1] == "153 groups"


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["frobnicate"])[0] == 2
