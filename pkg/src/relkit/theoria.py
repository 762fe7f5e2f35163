"""Interpretations, states, their pushout and state-formula satisfaction.

An interpretation is an equational presentation over the rigid signature. A
state defines flexible symbols by rigid ground terms. Both are glued along the
rigid signature inside the sum ``rigid + flexible`` where rigid symbols carry
the ``in_l`` tag and flexible ones the ``in_r`` tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Union

from relkit.eqcore import (
    FLEXIBLE,
    RIGID,
    EqSignature,
    Equation,
    PredApp,
    Sentence,
    SigMorphism,
    SumSignature,
    Tagged,
    Term,
    Var,
    check_term,
    sentence_symbols,
    tag_term,
    translate_sentence,
    translate_term,
)
from relkit.entail import EntailBudget, SchemaSentence, TheoryPres, entails
from relkit.errors import (
    ArityMismatch,
    FlexibleSymbolInInterpretation,
    NonRigidRightHandSide,
    SignatureMismatch,
    UnknownFlexibleSymbol,
    UnknownSymbol,
)
from relkit.verdict import Verdict


@dataclass(frozen=True)
class InterpretationTheory:
    rigid_sig: EqSignature
    theory: TheoryPres
    # schema grouping as written by the user; flattened into theory.schemas
    families: tuple[tuple[SchemaSentence, ...], ...] = ()

    @property
    def axioms(self) -> tuple[Sentence, ...]:
        return self.theory.ground_axioms

    @property
    def schemas(self) -> tuple[SchemaSentence, ...]:
        return self.theory.schemas


def _symbols_of(s: Sentence | SchemaSentence) -> Iterable:
    if isinstance(s, SchemaSentence):
        yield from sentence_symbols(s.body)
        for _, t in s.guards:
            yield from t.symbols()
    else:
        yield from sentence_symbols(s)


def mk_interpretation(
    sig: EqSignature,
    axioms: Iterable[Sentence] = (),
    schemas: Iterable[SchemaSentence | Iterable[SchemaSentence]] = (),
) -> InterpretationTheory:
    families: list[tuple[SchemaSentence, ...]] = []
    for item in schemas:
        families.append((item,) if isinstance(item, SchemaSentence) else tuple(item))
    flat = tuple(s for fam in families for s in fam)
    axioms = tuple(axioms)
    for s in axioms + flat:
        for sym in _symbols_of(s):
            if isinstance(sym, Tagged) or sym not in sig:
                raise FlexibleSymbolInInterpretation(
                    f"symbol {sym} in {s} is not a rigid symbol"
                )
    schemas_ranged = tuple(_with_range(s, sig) for s in flat)
    ranged_families = []
    it = iter(schemas_ranged)
    for fam in families:
        ranged_families.append(tuple(next(it) for _ in fam))
    return InterpretationTheory(sig, TheoryPres(sig, axioms, schemas_ranged), tuple(ranged_families))


def _with_range(s: SchemaSentence, sig: EqSignature) -> SchemaSentence:
    if s.range_sig is not None:
        return s
    return SchemaSentence(s.metavars, s.body, s.guards, sig)


@dataclass(frozen=True)
class ConstDef:
    symbol: str
    rhs: Term


@dataclass(frozen=True)
class FuncDef:
    symbol: str
    args: tuple[Term, ...]
    rhs: Term


@dataclass(frozen=True)
class PredDef:
    symbol: str
    args: tuple[Term, ...] = ()


Definition = Union[ConstDef, FuncDef, PredDef]


def definition_sentence(d: Definition) -> Sentence:
    """The definition as a sentence over the sum signature."""
    if isinstance(d, ConstDef):
        return Equation(Term(Tagged(FLEXIBLE, d.symbol)), tag_term(d.rhs, RIGID))
    if isinstance(d, FuncDef):
        lhs = Term(Tagged(FLEXIBLE, d.symbol), tuple(tag_term(a, RIGID) for a in d.args))
        return Equation(lhs, tag_term(d.rhs, RIGID))
    return PredApp(Tagged(FLEXIBLE, d.symbol), tuple(tag_term(a, RIGID) for a in d.args))


@dataclass(frozen=True)
class StateTheory:
    flexible_sig: EqSignature
    rigid_sig: EqSignature
    defs: tuple[Definition, ...] = ()

    def sentences(self) -> tuple[Sentence, ...]:
        return tuple(definition_sentence(d) for d in self.defs)

    def defined(self, symbol: str) -> tuple[Definition, ...]:
        return tuple(d for d in self.defs if d.symbol == symbol)

    @property
    def sum(self) -> SumSignature:
        return SumSignature(self.rigid_sig, self.flexible_sig)


def _check_rigid(rigid: EqSignature, t: Term, where: Definition) -> None:
    try:
        check_term(rigid, t)
    except (UnknownSymbol, ArityMismatch) as exc:
        raise NonRigidRightHandSide(f"{where}: {exc}") from None


def _check_def(flex: EqSignature, rigid: EqSignature, d: Definition) -> None:
    if d.symbol not in flex:
        raise UnknownFlexibleSymbol(f"{d.symbol!r} is not a flexible symbol")
    kind = flex.kind(d.symbol)
    expected = {ConstDef: "const", FuncDef: "func", PredDef: "pred"}[type(d)]
    if kind != expected:
        raise UnknownFlexibleSymbol(f"{d.symbol!r} is a {kind}, not a {expected}")
    args = getattr(d, "args", ())
    if len(args) != flex.arity(d.symbol):
        raise ArityMismatch(f"{d.symbol!r} expects {flex.arity(d.symbol)} argument(s)")
    for a in args:
        _check_rigid(rigid, a, d)
    if not isinstance(d, PredDef):
        _check_rigid(rigid, d.rhs, d)


def mk_state(flexible_sig: EqSignature, rigid_sig: EqSignature, defs: Iterable[Definition] = ()) -> StateTheory:
    defs = tuple(defs)
    for d in defs:
        _check_def(flexible_sig, rigid_sig, d)
    return StateTheory(flexible_sig, rigid_sig, defs)


def _tag_schema(s: SchemaSentence, rigid: EqSignature) -> SchemaSentence:
    def tag(t):
        if isinstance(t, Var):
            return t
        return Term(Tagged(RIGID, t.head), tuple(tag(a) for a in t.args))

    body = s.body
    if isinstance(body, Equation):
        body = Equation(tag(body.lhs), tag(body.rhs))
    else:
        body = PredApp(Tagged(RIGID, body.pred), tuple(tag(a) for a in body.args))
    guards = tuple((v, tag_term(t, RIGID)) for v, t in s.guards)
    range_sig = s.range_sig if s.range_sig is not None else rigid
    return SchemaSentence(s.metavars, body, guards, SumSignature(range_sig, EqSignature()).sig)


def _tag_sentence(s: Sentence) -> Sentence:
    if isinstance(s, Equation):
        return Equation(tag_term(s.lhs, RIGID), tag_term(s.rhs, RIGID))
    return PredApp(Tagged(RIGID, s.pred), tuple(tag_term(a, RIGID) for a in s.args))


def pushout(i: InterpretationTheory, s: StateTheory) -> TheoryPres:
    if i.rigid_sig != s.rigid_sig:
        raise SignatureMismatch("interpretation and state have different rigid signatures")
    return _pushout(i, s)


@lru_cache(maxsize=1024)
def _pushout(i: InterpretationTheory, s: StateTheory) -> TheoryPres:
    sig = SumSignature(i.rigid_sig, s.flexible_sig)
    axioms = tuple(_tag_sentence(a) for a in i.axioms) + s.sentences()
    schemas = tuple(_tag_schema(sc, i.rigid_sig) for sc in i.schemas)
    return TheoryPres(sig, axioms, schemas)


def sat_state(
    i: InterpretationTheory,
    s: StateTheory,
    alpha: Sentence,
    b: EntailBudget = EntailBudget(),
) -> Verdict:
    return entails(pushout(i, s), alpha, b)


def _rename(m: SigMorphism, t: Term) -> Term:
    return translate_term(m, t)


def translate_state(m_flex: SigMorphism, m_rigid: SigMorphism, s: StateTheory) -> StateTheory:
    if m_flex.source != s.flexible_sig or m_rigid.source != s.rigid_sig:
        raise SignatureMismatch("morphism sources do not match the state's signatures")
    out: list[Definition] = []
    for d in s.defs:
        sym = m_flex(d.symbol)
        if isinstance(d, ConstDef):
            out.append(ConstDef(sym, _rename(m_rigid, d.rhs)))
        elif isinstance(d, FuncDef):
            out.append(FuncDef(sym, tuple(_rename(m_rigid, a) for a in d.args), _rename(m_rigid, d.rhs)))
        else:
            out.append(PredDef(sym, tuple(_rename(m_rigid, a) for a in d.args)))
    return StateTheory(m_flex.target, m_rigid.target, tuple(out))


def _translate_schema(m: SigMorphism, s: SchemaSentence) -> SchemaSentence:
    return SchemaSentence(
        s.metavars,
        translate_sentence(m, s.body),
        tuple((v, translate_term(m, t)) for v, t in s.guards),
        m.target if s.range_sig is not None else None,
    )


def translate_interpretation(m_rigid: SigMorphism, i: InterpretationTheory) -> InterpretationTheory:
    if m_rigid.source != i.rigid_sig:
        raise SignatureMismatch("morphism source is not the interpretation's signature")
    axioms = tuple(translate_sentence(m_rigid, a) for a in i.axioms)
    families = tuple(tuple(_translate_schema(m_rigid, s) for s in fam) for fam in i.families)
    if not families and i.schemas:
        families = tuple((_translate_schema(m_rigid, s),) for s in i.schemas)
    return mk_interpretation(m_rigid.target, axioms, families)


def sum_sentence_sig(i: InterpretationTheory, s: StateTheory) -> EqSignature:
    return SumSignature(i.rigid_sig, s.flexible_sig).sig
