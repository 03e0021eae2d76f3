import json
import subprocess
import sys

import pytest

from x13verify.cli import main, resolve_series


def run(*args):
    return subprocess.run([sys.executable, "-m", "x13verify", *args], capture_output=True, text=True, timeout=600)


def test_verify_field_text(capsys):
    assert main(["verify", "--suite", "field"]) == 0
    out = capsys.readouterr().out
    assert "[PASS ] field_constants" in out and "1/1 checks passed" in out


def test_verify_json_output_file(tmp_path):
    target = tmp_path / "r.json"
    assert main(["verify", "--suite", "group", "--format", "json", "--output", str(target)]) == 0
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["suite"] == "group" and data["results"][0]["status"] == "pass"


def test_order_below_three_is_usage_error():
    proc = run("verify", "--order", "2")
    assert proc.returncode == 2 and "at least 3" in proc.stderr


def test_unknown_suite_is_usage_error():
    assert run("verify", "--suite", "bogus").returncode == 2


def test_dump_qexp_theta6(capsys):
    assert main(["dump", "qexp", "a6", "--order", "8"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1:3] == ["3/312 : 1", "1875/312 : -1"]


def test_dump_qexp_json(capsys):
    assert main(["dump", "qexp", "Delta", "--order", "4", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [c for _, c in data["entries"]] == ["1", "-24", "252", "-1472"]


def test_dump_unknown_series(capsys):
    assert main(["dump", "qexp", "nonsense"]) == 2
    assert "candidates" in capsys.readouterr().err


def test_dump_qexp_list(capsys):
    assert main(["dump", "qexp", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "Phi30-on-x" in names and "theta5-a" in names


def test_invariant_series_by_name():
    s = resolve_series("Phi30-on-x", 4)
    assert [int(s.coefficient(n * 312).to_fraction()) for n in (2, 3, 4)] == [1, -552, 8640]


def test_dump_matrices_and_forms(capsys):
    assert main(["dump", "matrices", "--format", "json"]) == 0
    mats = json.loads(capsys.readouterr().out)
    assert set(mats) == {"S", "T", "H", "P", "Q"}
    assert main(["dump", "forms"]) == 0
    forms = json.loads(capsys.readouterr().out)
    assert forms["G_restated_defects"][0]["form"] == "G6"
    assert set(forms["invariants"]) >= {"4", "8", "12", "12'", "30", "phi12"}


@pytest.mark.parametrize("name", ["x3", "E6", "theta5-b", "D5-on-a", "Dinf-on-a"])
def test_named_series_resolve(name):
    assert not resolve_series(name, 3).is_zero()
