import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from relkit.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

REPORT_SCHEMA = {
    "type": "object",
    "required": ["job", "verdict", "reason", "witness", "ms", "inputs", "budget"],
    "properties": {
        "job": {"enum": ["entail", "frame-verify", "check", "morphism"]},
        "verdict": {"enum": ["true", "false", "unknown", "pass", "fail"]},
        "reason": {"type": ["string", "null"]},
        "ms": {"type": "number", "minimum": 0},
        "inputs": {"type": "object"},
        "budget": {"type": "object"},
        "detail": {"type": "array"},
    },
}

EXTRA = """
signature R { const 0, 1; func + : 2; }
signature V { const x; }
interpretation I over R { schema t : 0 + t = t; }
interpretation G over R { axiom 0 + 0 = 0; }
state a over V, R { x := 0; }
state b over V, R { x := 1; }
frame A { states a; rel T = {(a, a)}; }
frame B { states b; rel T = {(b, b)}; }
frame D { states a, b; rel T = {(a, b)}; }
conditions Tot { total T; functional T; }
map m : A -> B { rel T -> T; a -> b; }
"""


@pytest.fixture
def extra(tmp_path):
    p = tmp_path / "extra.rks"
    p.write_text(EXTRA, encoding="utf-8")
    return str(p)


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = main([str(a) for a in argv], out, err)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def reports(text):
    return [json.loads(line) for line in text.splitlines()]


ARITH = CORPUS / "arith_state.rks"
LASSO = CORPUS / "ltl_lasso.rks"
CYCLE = CORPUS / "ctl_cycle.rks"
MORPH = CORPUS / "morphism.rks"


def test_entail_exit_codes(extra):
    assert run("entail", ARITH, "--theory", "I", "--goal", "0 + 1 = 1", "--depth", "2")[0] == 0
    assert run("entail", ARITH, "--theory", "Nope", "--goal", "0 = 0")[0] == 3
    assert run("entail", extra, "--theory", "G", "--goal", "0 = 1")[0] == 1
    code, out, _ = run("entail", extra, "--theory", "I", "--goal", "0 = 1", "--json")
    assert code == 2 and reports(out)[0]["reason"] == "budget-exhausted"


def test_entail_with_state(extra):
    code, out, _ = run("entail", extra, "--theory", "I", "--state", "a", "--goal", "x = 0 + 0", "--json")
    assert code == 0 and reports(out)[0]["inputs"]["state"] == "a"


def test_frame_verify(extra):
    assert run("frame-verify", LASSO, "--frame", "M", "--conditions", "LtlRel")[0] == 0
    code, out, _ = run("frame-verify", extra, "--frame", "D", "--conditions", "Tot")
    assert code == 1 and "witness" in out and "b" in out
    assert run("frame-verify", extra, "--frame", "D", "--axioms-selftest")[0] == 0
    assert run("frame-verify", extra, "--frame", "D")[0] == 3


def test_check_exit_codes(extra):
    assert run("check", LASSO, "--logic", "ltl", "--frame", "M", "--at", "s0", "--formula", "X p")[0] == 0
    assert run("check", CYCLE, "--logic", "ctl", "--frame", "K", "--at", "s0", "--formula", "EX !p")[0] == 1
    code, out, _ = run(
        "check", CYCLE, "--logic", "ctlstar", "--frame", "K", "--at", "s0", "--formula", "E[X !p]", "--bound", "1", "--json"
    )
    assert code == 2 and reports(out)[0]["reason"] == "budget-exhausted"


def test_check_reports_witness_lasso():
    code, out, _ = run(
        "check", CYCLE, "--logic", "ctl", "--frame", "K", "--at", "s0", "--formula", "E[true U p]", "--json"
    )
    assert code == 0 and reports(out)[0]["witness"] == {"prefix": ["s0"], "cycle": ["s1", "s2"]}


def test_frame_condition_violation_names_axiom(extra):
    code, out, err = run("check", extra, "--logic", "ltl", "--frame", "D", "--at", "a", "--formula", "true")
    assert code == 3 and out == "" and "frame condition violated: total T" in err


def test_morphism_exit_codes(extra):
    assert run("morphism", MORPH, "--map", "ident")[0] == 0
    code, out, _ = run("morphism", MORPH, "--map", "partial")
    assert code == 1 and "backward" in out
    assert run("morphism", extra, "--map", "m", "--with", "I")[0] == 2


def test_usage_and_parse_errors(tmp_path):
    bad = tmp_path / "bad.rks"
    bad.write_text("frame {", encoding="utf-8")
    code, _, err = run("run", bad)
    assert code == 3 and "error" in err
    assert run("run", tmp_path / "missing.rks")[0] == 3
    assert run("check", LASSO, "--frame", "M", "--formula", "p")[0] == 3
    assert run("nonsense")[0] == 3
    assert run("check", CYCLE, "--bound", "0")[0] == 3


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.rks")), ids=lambda p: p.name)
def test_json_reports_validate_and_are_deterministic(path):
    code1, out1, _ = run("run", path, "--json")
    code2, out2, _ = run("run", path, "--json")
    assert code1 == code2 and "\x1b" not in out1
    first, second = reports(out1), reports(out2)
    for rep in first:
        jsonschema.validate(rep, REPORT_SCHEMA)
    for a, b in zip(first, second):
        a.pop("ms"), b.pop("ms")
    assert first == second


def test_stdin_and_fmt(tmp_path):
    text = ARITH.read_text(encoding="utf-8")
    code, canon, _ = run("fmt", "-", stdin=text)
    assert code == 0
    assert run("fmt", "--check", "-", stdin=canon)[0] == 0
    messy = tmp_path / "messy.rks"
    messy.write_text(canon.replace("\n", "\n\n"), encoding="utf-8")
    assert run("fmt", "--check", messy)[0] == 1
    assert run("entail", "-", "--theory", "I", "--goal", "0 + 1 = 1", stdin=text)[0] == 0


def test_depth_precedence(monkeypatch):
    goal = ["entail", ARITH, "--theory", "I", "--goal", "0 + 1 = 1", "--json"]
    monkeypatch.setenv("RELKIT_DEPTH", "1")
    assert reports(run(*goal)[1])[0]["budget"]["depth"] == 1
    assert reports(run(*goal, "--depth", "2")[1])[0]["budget"]["depth"] == 2
    monkeypatch.delenv("RELKIT_DEPTH")
    assert reports(run(*goal)[1])[0]["budget"]["depth"] == 3


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "relkit", "check", str(LASSO), "--logic", "ltl", "--frame", "M", "--at", "s0", "--formula", "p"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 1 and "false" in proc.stdout and "witness" in proc.stdout
