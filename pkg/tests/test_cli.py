import io
import json
import subprocess
import sys

import pytest

from anop.cli import execute
from anop.model import normalize_model
import anop.serialize as sz

from conftest import GOLDEN, SPECS, same_model


def run_cli(argv, stdin_text=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = execute(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


GOLDEN_CASES = [
    (["classify", "violator_from_below.json"], "classify_from_below.json"),
    (["classify", "positive_tail.json"], "classify_positive_tail.json"),
    (["classify", "selfadjoint_signed.json"], "classify_selfadjoint.json"),
    (["decompose", "uniqueness_full.json"], "decompose_full.json"),
    (["structure", "selfadjoint_signed.json"], "structure_selfadjoint.json"),
]


@pytest.mark.parametrize("argv,golden", GOLDEN_CASES,
                         ids=[g for _, g in GOLDEN_CASES])
def test_golden_outputs_are_stable(argv, golden):
    argv = [argv[0], str(SPECS / argv[1])]
    code, first, _ = run_cli(argv)
    assert code == 0
    code, second, _ = run_cli(argv)
    assert code == 0
    assert first == second
    assert first == (GOLDEN / golden).read_text()


def test_every_shipped_spec_classifies_deterministically():
    for path in sorted(SPECS.glob("*.json")):
        code, first, _ = run_cli(["classify", str(path)])
        assert code == 0, path.name
        code, second, _ = run_cli(["classify", str(path)])
        assert first == second, path.name
        assert first.endswith("\n") and "\n" not in first[:-1]


def test_report_envelope_fields():
    code, out, _ = run_cli(["classify", str(SPECS / "positive_tail.json")])
    env = json.loads(out)
    assert code == 0
    assert env["schema_version"] == "1"
    assert env["command"] == "classify"
    assert env["diagnostics"] == []
    assert env["result"]["is_an"] is True


def test_garbage_stdin_exits_one_with_parse_diagnostic(monkeypatch):
    code, out, _ = run_cli(["classify"], stdin_text="{never json",
                           monkeypatch=monkeypatch)
    assert code == 1
    env = json.loads(out)
    assert env["result"] is None
    assert env["diagnostics"][0]["code"] == "PARSE"


def test_missing_file_exits_one_with_io_diagnostic(tmp_path):
    code, out, _ = run_cli(["classify", str(tmp_path / "nope.json")])
    assert code == 1
    env = json.loads(out)
    assert env["diagnostics"][0]["code"] == "IO"


def test_domain_failure_exits_two(monkeypatch):
    code, triple_doc, _ = run_cli(["decompose", str(SPECS / "kernel_case.json")])
    assert code == 0
    code, out, _ = run_cli(["invert"], stdin_text=triple_doc,
                           monkeypatch=monkeypatch)
    assert code == 2
    env = json.loads(out)
    assert env["diagnostics"][0]["code"] == "NOT_INJECTIVE"
    assert env["result"] is None


def test_usage_errors_exit_sixtyfour():
    for argv in ([], ["classify", "--bogus"], ["shift", "x.json"],
                 ["realize", "x.json"]):
        code, out, err = run_cli(argv)
        assert code == 64, argv
        assert out == ""
        assert err.startswith("anop:")


def test_help_exits_zero():
    code, _, _ = run_cli(["--help"])
    assert code == 0


def test_pipe_decompose_into_recompose(monkeypatch):
    src = SPECS / "uniqueness_full.json"
    code, piped, _ = run_cli(["decompose", str(src)])
    assert code == 0
    code, out, _ = run_cli(["recompose"], stdin_text=piped,
                           monkeypatch=monkeypatch)
    assert code == 0
    got = sz.parse_model(json.loads(out)["result"])
    want = normalize_model(sz.parse_model(json.loads(src.read_text())))
    assert same_model(got, want, tol=1e-12)


def test_realize_verify_attaches_report(monkeypatch):
    argv = ["realize", str(SPECS / "uniqueness_full.json"),
            "--dim", "10", "--seed", "3", "--verify"]
    code, out, _ = run_cli(argv)
    assert code == 0
    result = json.loads(out)["result"]
    assert result["verification"]["ok"] is True
    assert len(result["matrix"]) == 10
    assert result["labels"][0] == "k"


def test_env_tolerance_must_be_numeric(monkeypatch):
    monkeypatch.setenv("ANOP_TOL", "loose")
    code, out, _ = run_cli(["oracle", str(SPECS / "positive_tail.json")])
    assert code == 1
    assert json.loads(out)["diagnostics"][0]["code"] == "PARSE"
    # an explicit flag wins over the broken environment
    code, out, _ = run_cli(["oracle", str(SPECS / "positive_tail.json"),
                            "--tol", "1e-9"])
    assert code == 0
    assert json.loads(out)["result"]["is_an"] is True


def test_fuzz_reports_full_agreement():
    code, out, _ = run_cli(["fuzz", "--count", "24", "--seed", "7"])
    assert code == 0
    result = json.loads(out)["result"]
    assert result["agreements"] == 24
    assert result["disagreements"] == []


def test_blocks_and_matrix_inverse_round_trip(monkeypatch):
    src = str(SPECS / "uniqueness_full.json")
    code, out, _ = run_cli(["blocks", src, "--dim", "12", "--seed", "5"])
    assert code == 0
    result = json.loads(out)["result"]
    assert result["range_dim"] + result["kernel_dim"] == 12
    assert result["off_diagonal_norm"] <= 1e-10

    code, out, _ = run_cli(["invert-matrix", src, "--dim", "12", "--seed", "5"])
    assert code == 0
    assert json.loads(out)["result"]["residual"] <= 1e-10


def test_console_script_reads_file():
    proc = subprocess.run(
        ["anop", "classify", str(SPECS / "positive_tail.json")],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "classify_positive_tail.json").read_text()


def test_console_script_reads_stdin():
    doc = (SPECS / "selfadjoint_signed.json").read_text()
    proc = subprocess.run(["anop", "structure", "-"], input=doc,
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "structure_selfadjoint.json").read_text()
