import json
import shutil

import pytest

from descentkit.cli import main
from descentkit.field import make_field
from descentkit.gallery import truncated_polynomial
from descentkit.io import module_to_json, write_json

from conftest import cyclic_quotient


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def flagdir(tmp_path, capsys):
    d = tmp_path / "flag"
    code, rep = run(capsys, "gallery", "--family", "frobenius:2,1,1", "--out", d)
    assert code == 0
    b = truncated_polynomial(make_field(2), 4)
    write_json(d / "modules" / "bx3.json", module_to_json(cyclic_quotient(b, 3), "../B.json"))
    return d


def test_gallery_files_validate(flagdir, capsys):
    files = sorted(flagdir.rglob("*.json"))
    code, rep = run(capsys, "validate", *files)
    assert code == 0
    assert all(r["valid"] for r in rep["payload"]["files"])
    kinds = {r["kind"] for r in rep["payload"]["files"]}
    assert kinds == {"algebra", "algebra_map", "module"}


def test_validate_corrupted_and_malformed(flagdir, tmp_path, capsys):
    obj = json.loads((flagdir / "B.json").read_text())
    obj["mul"] = [e for e in obj["mul"] if e[:3] != [1, 2, 3]]  # drop x * x^2 = x^3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    code, rep = run(capsys, "validate", bad)
    assert code == 1
    viol = rep["payload"]["files"][0]["violations"]
    assert viol and "witness" in json.dumps(viol)
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, rep = run(capsys, "validate", junk)
    assert code == 2 and rep["payload"]["files"][0]["error"]


def test_descend_exit_codes(flagdir, capsys):
    code, rep = run(capsys, "descend", "--context", flagdir, "--module", flagdir / "modules" / "B.json")
    assert code == 0 and rep["payload"]["outcome"] == "certificate"
    assert rep["payload"]["M"]["dim"] == 2 and rep["payload"]["verified"]
    code, rep = run(capsys, "descend", "--context", flagdir, "--module", flagdir / "modules" / "k.json")
    assert code == 3 and rep["payload"]["criterion"]["free"] is False
    code, rep = run(capsys, "descend", "--context", flagdir, "--module", flagdir / "modules" / "bx3.json")
    p = rep["payload"]
    assert code == 3 and p["criterion"]["free"] and p["failed_step"] == "S4"
    assert p["oracle"] == "no" and p["discrepancy"] == ["criterion_free_but_not_extended"]


def test_descend_explicit_flags_and_out_file(flagdir, tmp_path, capsys):
    out = tmp_path / "r" / "rep.json"
    code = main(["descend", "-a", str(flagdir / "A.json"), "-b", str(flagdir / "B.json"),
                 "-f", str(flagdir / "f.json"), "-m", str(flagdir / "modules" / "B.json"), "--out", str(out)])
    assert code == 0 and capsys.readouterr().out == ""
    assert json.loads(out.read_text())["payload"]["outcome"] == "certificate"


def test_descend_hypothesis_error(tmp_path, capsys):
    d = tmp_path / "g"
    run(capsys, "gallery", "--family", "group:C2<C6", "--out", d)  # F2[C6] is not local
    code, rep = run(capsys, "descend", "--context", d, "--module", d / "modules" / "B.json")
    assert code == 1 and rep["payload"]["failed_check"]


def test_classify_table(flagdir, tmp_path, capsys):
    code, rep = run(capsys, "classify", "--context", flagdir, "--modules", flagdir / "modules")
    assert code == 0
    rows = {r["file"]: r for r in rep["payload"]["rows"]}
    assert rows["B.json"]["outcome"] == "certificate"
    assert rows["k.json"]["outcome"] == "failure"
    assert rows["bx3.json"]["discrepancy"] == ["criterion_free_but_not_extended"]
    assert rep["payload"]["summary"]["discrepancies"] == 1
    empty = tmp_path / "empty"
    empty.mkdir()
    code, rep = run(capsys, "classify", "--context", flagdir, "--modules", empty)
    assert code == 0 and rep["payload"]["rows"] == [] and rep["payload"]["summary"]["modules"] == 0


def test_classify_mixed_algebras(flagdir, capsys):
    mix = flagdir / "mix"  # a sibling of modules/, so "../B.json" still resolves
    shutil.copytree(flagdir / "modules", mix)
    a = truncated_polynomial(make_field(2), 2, var="y")
    write_json(mix / "over_a.json", module_to_json(cyclic_quotient(a, 1), str(flagdir / "A.json")))
    code, rep = run(capsys, "classify", "--context", flagdir, "--modules", mix, "--oracle", "off")
    assert code == 0
    rows = {r["file"]: r for r in rep["payload"]["rows"]}
    assert rows["over_a.json"]["error"] == "AlgebraMismatch"
    assert rows["B.json"]["oracle"] == "skipped"


def test_gallery_errors_and_groups(tmp_path, capsys):
    code, rep = run(capsys, "gallery", "--family", "frobenius:4,1,1", "--out", tmp_path / "x")
    assert code == 2 and rep["payload"]["error"] == "BadFamilySpec"
    d = tmp_path / "c4"
    code, rep = run(capsys, "gallery", "--family", "group:C4", "--out", d)
    assert code == 0
    b = json.loads((d / "B.json").read_text())
    assert b["dim"] == 4 and b["field"] == {"kind": "prime", "p": 2}
    code, _ = run(capsys, "validate", d / "A.json", d / "B.json", d / "f.json")
    assert code == 0


def test_oracle_command(flagdir, capsys):
    code, rep = run(capsys, "oracle", "--context", flagdir, "--max-dim", 3)
    p = rep["payload"]
    assert code == 0 and p["classes"] == 6
    assert p["sets_agree"] and p["all_certificates_verify"]
    assert [d["module"] for d in p["discrepancies"]] == ["J3"]
    code, rep = run(capsys, "oracle", "--context", flagdir, "--max-dim", 0)
    assert code == 0 and rep["payload"]["rows"] == []


def test_oracle_over_rationals(tmp_path, capsys):
    d = tmp_path / "q"
    code, _ = run(capsys, "gallery", "--family", "exterior:1<2", "--field", "QQ", "--out", d)
    assert code == 0
    code, rep = run(capsys, "oracle", "--context", d, "--max-dim", 2)
    assert code == 4 and rep["payload"]["error"] == "Unsupported"


def test_reports_are_byte_identical(flagdir, capsys):
    argv = ["oracle", "--context", str(flagdir), "--max-dim", "2"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_seed_from_environment(flagdir, capsys, monkeypatch):
    monkeypatch.setenv("DESCENTKIT_SEED", "77")
    _, rep = run(capsys, "descend", "--context", flagdir, "--module", flagdir / "modules" / "B.json")
    assert rep["seed"] == 77
    _, rep = run(capsys, "descend", "--context", flagdir, "--module", flagdir / "modules" / "B.json", "--seed", "0x10")
    assert rep["seed"] == 16


def test_bad_arguments(capsys):
    assert main(["descend"]) == 2
    capsys.readouterr()
