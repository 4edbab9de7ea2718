import json
import shutil
import subprocess
import sys

import pytest

from modestab import cli, data
from modestab.certificate import Certificate, forest_from_json, forest_to_json


def _run(*args):
    return subprocess.run(
        [sys.executable, "-m", "modestab.cli", *args], capture_output=True, text=True, check=False
    )


def test_resolvent_exit_zero_and_text_totals():
    out = _run("certify", "--region", "resolvent")
    assert out.returncode == 0
    assert "VERDICT: PASS" in out.stdout
    assert "TOTAL: 12 passed, 0 failed" in out.stdout


def test_missing_data_dir_is_operational_error():
    out = _run("certify", "--region", "S3", "--data", "/nonexistent/dir")
    assert out.returncode == 2
    assert "error:" in out.stderr


def _tampered_dir(tmp_path, line_prefix: str, new_line: str):
    d = tmp_path / "data"
    shutil.copytree(data.default_data_dir(), d)
    f = d / "coefficient_bounds.txt"
    lines = [new_line if ln.startswith(line_prefix) else ln for ln in f.read_text().splitlines()]
    f.write_text("\n".join(lines) + "\n")
    return d


def test_checksum_mismatch_exit_two(tmp_path):
    d = _tampered_dir(tmp_path, "15 ", "15 1 - 1")
    assert _run("certify", "--region", "S2", "--data", str(d)).returncode == 2


def test_failing_leaf_exit_one(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(data.default_data_dir(), d)
    f = d / "coefficient_bounds.txt"
    lines = f.read_text().splitlines()
    for i, ln in enumerate(lines):
        tok = ln.split()
        if tok and tok[0] == "15":
            tok[1] = str(int(tok[1]) * 99 // 100)
            lines[i] = " ".join(tok)
    f.write_text("\n".join(lines) + "\n")
    data.write_manifest(d)
    out = _run("certify", "--region", "S2", "--data", str(d))
    assert out.returncode == 1
    assert "[FAIL] tables/J15" in out.stdout


def test_reports_are_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli.main(["certify", "--region", "S3", "--format", "json", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_schema_and_round_trip(tmp_path):
    p = tmp_path / "r.json"
    cli.main(["certify", "--region", "resolvent", "--format", "json", "--out", str(p)])
    doc = json.loads(p.read_text())
    leaf = doc[0]["leaves"][0]
    assert set(leaf) >= {"name", "claim", "computed", "verdict", "ms"}
    assert all(isinstance(lf["computed"], str) for lf in doc[0]["leaves"])
    forest = forest_from_json(p.read_text())
    assert forest_to_json(forest, timings=False) == p.read_text()


def test_exact_values_in_json(tmp_path):
    p = tmp_path / "r.json"
    cli.main(["certify", "--region", "resolvent", "--format", "json", "--out", str(p)])
    product = next(lf for lf in json.loads(p.read_text())[0]["leaves"] if lf["name"] == "product")
    assert product["computed"] == "380"


def test_composition_requires_every_region():
    ok = Certificate("S1")
    ok.holds("x", True, "x")
    bad = Certificate("S2")
    bad.holds("x", False, "x")
    forest = [ok, bad] + [Certificate(r) for r in ("resolvent", "S3", "S4")]
    for c in forest[2:]:
        c.holds("x", True, "x")
    comp = cli.compose(forest)
    assert not comp.passed
    assert comp.leaf("region/S2").verdict is False
    assert comp.conclusion == []


def test_parser_rejects_unknown_region():
    with pytest.raises(SystemExit):
        cli.build_parser().parse_args(["certify", "--region", "S5"])
