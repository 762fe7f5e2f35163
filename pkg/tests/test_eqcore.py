import random

import pytest

from relkit.eqcore import (
    FLEXIBLE,
    RIGID,
    EqSignature,
    Equation,
    PredApp,
    SigMorphism,
    Tagged,
    Term,
    check_sentence,
    check_term,
    compose_morphisms,
    mk_term,
    sum_signature,
    translate_sentence,
)
from relkit.errors import ArityMismatch, InvalidSignature, SignatureMismatch, SymbolNotInSource, UnknownSymbol

SIG = EqSignature(["a", "c"], {"f": 1, "g": 2}, {"P": 1, "Q": 1})


def test_mk_term_constant_and_application():
    assert mk_term(SIG, "c") == Term("c")
    c = mk_term(SIG, "c")
    assert mk_term(SIG, "f", [c]) == Term("f", (Term("c"),))


def test_mk_term_rejects_wrong_arity_and_unknown_symbols():
    c = Term("c")
    with pytest.raises(ArityMismatch):
        mk_term(SIG, "f", [c, c])
    with pytest.raises(UnknownSymbol):
        mk_term(SIG, "nope", [])
    with pytest.raises(UnknownSymbol):
        mk_term(SIG, "P", [c])


def test_signature_invariants():
    with pytest.raises(InvalidSignature):
        EqSignature(["a"], {"a": 1})
    with pytest.raises(InvalidSignature):
        EqSignature([], {"f": 0})
    s1 = EqSignature(["a", "b"], {"f": 1})
    s2 = EqSignature(["b", "a"], {"f": 1})
    assert s1 == s2 and hash(s1) == hash(s2)
    assert s1.arity("a") == 0 and s1.kind("f") == "func"


def test_check_sentence_catches_bad_arity():
    with pytest.raises(ArityMismatch):
        check_sentence(SIG, PredApp("P", (Term("a"), Term("a"))))
    with pytest.raises(ArityMismatch):
        check_term(SIG, Term("g", (Term("a"),)))


def rename_oracle(mapping, s):
    def t(x):
        return Term(mapping[x.head], tuple(t(a) for a in x.args))

    if isinstance(s, Equation):
        return Equation(t(s.lhs), t(s.rhs))
    return PredApp(mapping[s.pred], tuple(t(a) for a in s.args))


def test_translate_examples():
    ident = SigMorphism.identity(SIG)
    s = Equation(Term("a"), Term("f", (Term("c"),)))
    assert translate_sentence(ident, s) == s
    tgt = EqSignature(["b", "c"], {"h": 1, "g": 2}, {"R": 1, "Q": 1})
    m = SigMorphism(SIG, tgt, {"a": "b", "c": "c", "f": "h", "g": "g", "P": "R", "Q": "Q"})
    assert translate_sentence(m, Equation(Term("a"), Term("a"))) == Equation(Term("b"), Term("b"))
    src = PredApp("P", (Term("f", (Term("a"),)),))
    assert translate_sentence(m, src) == PredApp("R", (Term("h", (Term("b"),)),))


def test_translate_missing_symbol():
    m = SigMorphism.identity(EqSignature(["a"]))
    with pytest.raises(SymbolNotInSource):
        translate_sentence(m, Equation(Term("z"), Term("z")))


def test_morphism_must_preserve_arity():
    with pytest.raises(ArityMismatch):
        SigMorphism(EqSignature([], {"f": 1}), EqSignature([], {"g": 2}), {"f": "g"})
    with pytest.raises(SymbolNotInSource):
        SigMorphism(SIG, SIG, {"a": "a"})


def _random_term(rng, depth):
    if depth == 0 or rng.random() < 0.4:
        return Term(rng.choice(["a", "c"]))
    if rng.random() < 0.5:
        return Term("f", (_random_term(rng, depth - 1),))
    return Term("g", (_random_term(rng, depth - 1), _random_term(rng, depth - 1)))


def _random_sentence(rng):
    if rng.random() < 0.5:
        return Equation(_random_term(rng, 3), _random_term(rng, 3))
    return PredApp(rng.choice(["P", "Q"]), (_random_term(rng, 3),))


def _random_endo(rng):
    return SigMorphism(
        SIG,
        SIG,
        {
            "a": rng.choice(["a", "c"]),
            "c": rng.choice(["a", "c"]),
            "f": "f",
            "g": "g",
            "P": rng.choice(["P", "Q"]),
            "Q": rng.choice(["P", "Q"]),
        },
    )


def test_translation_matches_independent_renamer_and_is_functorial():
    rng = random.Random(7)
    for _ in range(300):
        m1, m2 = _random_endo(rng), _random_endo(rng)
        s = _random_sentence(rng)
        out = translate_sentence(m1, s)
        assert out == rename_oracle(m1.mapping, s)
        check_sentence(m1.target, out)
        composed = compose_morphisms(m1, m2)
        assert translate_sentence(composed, s) == translate_sentence(m2, out)


def test_composition_laws():
    rng = random.Random(3)
    ident = SigMorphism.identity(SIG)
    for _ in range(20):
        m = _random_endo(rng)
        assert compose_morphisms(ident, m) == m
        assert compose_morphisms(m, ident) == m
    a, b, c = EqSignature(["a"]), EqSignature(["b"]), EqSignature(["c"])
    ab, bc = SigMorphism(a, b, {"a": "b"}), SigMorphism(b, c, {"b": "c"})
    assert compose_morphisms(ab, bc)("a") == "c"
    with pytest.raises(SignatureMismatch):
        compose_morphisms(bc, ab)


def test_sum_signature_tags_and_injections():
    empty = sum_signature(EqSignature(), EqSignature())
    assert empty.sig.is_empty()
    rig = EqSignature(["0", "1"], {"+": 2, "*": 2}, {"<": 2})
    flex = EqSignature(["x", "y"])
    s = sum_signature(rig, flex)
    assert Tagged(RIGID, "0") in s.sig and Tagged(FLEXIBLE, "x") in s.sig
    assert s.in_l()("0") == Tagged(RIGID, "0")
    assert s.in_r()("x") == Tagged(FLEXIBLE, "x")
    clash = sum_signature(EqSignature(["x"]), EqSignature(["x"]))
    assert len(clash.sig) == 2
    with pytest.raises(UnknownSymbol):
        clash.resolve("x")


def test_term_hash_and_depth_cached_consistently():
    t = Term("g", (Term("a"), Term("f", (Term("c"),))))
    u = Term("g", (Term("a"), Term("f", (Term("c"),))))
    assert t == u and hash(t) == hash(u)
    assert t.depth() == 3  # constants have depth 1
