"""Command line driver: exit codes, output formats, report files."""

import json
import subprocess
import sys

import pytest

from hopfcheck import cli

F2_DOC = {"kind": "function_algebra", "group": [[0, 1], [1, 0]]}


@pytest.fixture
def f2_file(tmp_path):
    path = tmp_path / "f2.json"
    path.write_text(json.dumps(F2_DOC))
    return str(path)


def test_validate_exit_zero(f2_file, capsys):
    assert cli.main(["validate", f2_file]) == 0
    out = capsys.readouterr().out
    assert "hopf.coassociativity" in out
    assert "0 failed" in out
    assert "FAIL" not in out


def test_span_check_prints_bare_count(f2_file, capsys):
    assert cli.main(["span-check", f2_file]) == 0
    assert capsys.readouterr().out == "4\n"


def test_json_format(f2_file, capsys):
    assert cli.main(["haar", f2_file, "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert sorted(body) == ["report", "result"]
    assert body["report"]["tool"] == "hopfcheck"
    assert body["report"]["pass"] is True
    assert body["result"]["tau"] == [[0.5, 0.0], [0.5, 0.0]]


def test_report_file_is_reproducible(f2_file, tmp_path, capsys):
    target = tmp_path / "report.json"
    assert cli.main(["comatrix", f2_file, "--report", str(target)]) == 0
    first = target.read_bytes()
    assert cli.main(["comatrix", f2_file, "--report", str(target)]) == 0
    assert target.read_bytes() == first
    payload = json.loads(first)
    assert list(payload) == ["tool", "version", "input_digest", "seed", "pass", "entries", "timing"]
    assert payload["input_digest"].startswith("sha256:")
    assert payload["timing"] is None
    capsys.readouterr()


def test_hopf_flag_is_an_alias(f2_file, capsys):
    assert cli.main(["span-check", "--hopf", f2_file]) == 0
    capsys.readouterr()


def test_both_inputs_rejected(f2_file, capsys):
    assert cli.main(["validate", f2_file, "--hopf", f2_file]) == 2
    assert "not both" in capsys.readouterr().err


def test_missing_file_exit_two(tmp_path, capsys):
    assert cli.main(["validate", str(tmp_path / "absent.json")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_malformed_json_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    assert cli.main(["validate", str(path)]) == 2
    assert "not UTF-8 JSON" in capsys.readouterr().err


def test_wrong_kind_exit_three(tmp_path, capsys):
    path = tmp_path / "plain.json"
    path.write_text(json.dumps({"kind": "crossed_base", "of": F2_DOC}))
    assert cli.main(["span-check", str(path)]) == 3
    assert "needs a Hopf algebra" in capsys.readouterr().err


def test_failing_checks_exit_four(f2_file, capsys):
    # the stage intertwiners land around 1e-15, so a 1e-18 gate must fail
    assert cli.main(["trivialize-1", f2_file, "--tol", "1e-18"]) == 4
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "failed" in out


def test_tower_level_flag(f2_file, capsys):
    assert cli.main(["tower", f2_file, "--level", "1"]) == 0
    out = capsys.readouterr().out
    assert "level1." in out
    assert "level2." not in out


def test_module_entry_point(f2_file):
    proc = subprocess.run(
        [sys.executable, "-m", "hopfcheck.cli", "span-check", f2_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "4\n"


def test_serve_is_a_subcommand():
    parser = cli._build_parser()
    args = parser.parse_args(["serve", "--port", "9000"])
    assert args.command == "serve"
    assert args.port == 9000
