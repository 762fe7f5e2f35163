from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fuzz
from relkit.dsl import Diagnostic, ParseFailed, parse, parse_formula, parse_rel_formula, parse_source, print_workspace
from relkit.relalg import MACROS, format_formula

GOLDEN = Path(__file__).parent / "golden"
CORPUS = {p.name: p.read_text(encoding="utf-8") for p in fuzz.CORPUS}


def test_empty_source():
    ws = parse("")
    assert ws.is_empty() and print_workspace(ws) == ""


def test_arith_example_shape():
    ws = parse(CORPUS["arith_state.rks"])
    (i,) = ws.interpretations.values()
    (s,) = ws.states.values()
    assert len(i.families) == 5 and len(s.defs) == 2


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_round_trip(name):
    ws = parse(CORPUS[name])
    text = print_workspace(ws)
    again = parse(text)
    assert again == ws
    assert print_workspace(again) == text


def test_unresolved_symbol_diagnostic_has_span():
    src = (
        "signature R { const 0; func + : 2; }\n"
        "signature F { const x; }\n"
        "state s0 over F, R { x := 0; }\n"
        "state s1 { x := 0 + missing; }\n"
    )
    ws, diags = parse_source(src)
    assert ws is None
    (d,) = diags
    assert d.message == "unresolved symbol 'missing'" and (d.line, d.col) == (4, 21)


def test_suggestion_for_misspelt_keyword():
    _, diags = parse_source("signatur R { }")
    assert diags[0].severity == "error" and diags[0].suggestion == "signature"
    _, diags = parse_source("signature R { const zero; }\ninterpretation I over R { axiom zer = zero; }")
    assert diags[0].suggestion == "zero"


def test_parse_failed_carries_diagnostics():
    with pytest.raises(ParseFailed) as exc:
        parse("frame K { states ; }")
    assert exc.value.diagnostics and all(isinstance(d, Diagnostic) for d in exc.value.diagnostics)


@pytest.mark.parametrize("name", sorted(MACROS))
def test_macro_expansion_matches_golden(name):
    rel = "St0" if name == "initial" else "T"
    want = (GOLDEN / f"{name}.txt").read_text(encoding="utf-8").rstrip("\n")
    assert format_formula(MACROS[name](rel)) == want
    assert parse_rel_formula(want) == MACROS[name](rel)


def test_formula_fragments():
    ws = parse(CORPUS["ctl_cycle.rks"])
    phi = parse_formula(ws, "ctl", "K", "AG EF p")
    assert phi is not None
    with pytest.raises(ParseFailed):
        parse_formula(ws, "ctl", "K", "X p")
    with pytest.raises(ParseFailed):
        parse_formula(ws, "ctl", "nope", "p")


def _spans_inside(source: bytes, diags):
    lines = source.decode("utf-8", errors="replace").split("\n")
    for d in diags:
        assert 1 <= d.line <= len(lines) + 1
        assert d.col >= 1


def test_fuzz_sample_never_crashes():
    failures = 0
    for data in fuzz.inputs(seed=99, count=5000):
        ws, diags = parse_source(data)
        assert (ws is None) == bool(diags)
        failures += ws is None
        _spans_inside(data, diags)
    assert failures > 2500


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(list("{}();,:=!<>-~*+.' \nxyTs0pqEAXFGU[]") + ["state ", "frame ", "check ", "signature "]), max_size=40))
def test_keyword_soup_yields_diagnostics_or_workspace(parts):
    ws, diags = parse_source("".join(parts))
    assert (ws is None) == bool(diags)
