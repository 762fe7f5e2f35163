"""Equational signatures, ground terms, sentences and signature morphisms.

Symbols are plain strings inside an ordinary signature. Inside the sum of two
signatures every symbol is a :class:`Tagged` value remembering which side it
was injected from, so ``in_l(0)`` and ``in_r(0)`` never collide.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union

from relkit.errors import (
    ArityMismatch,
    InvalidSignature,
    SignatureMismatch,
    SymbolNotInSource,
    UnknownSymbol,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z|[0-9]+\Z")

RIGID = "l"
FLEXIBLE = "r"


@dataclass(frozen=True, order=True)
class Tagged:
    """A symbol injected into a sum signature (side ``"l"`` or ``"r"``)."""

    side: str
    name: str

    def __str__(self) -> str:
        return f"in_{self.side}({self.name})"


Symbol = Union[str, Tagged]


def symbol_name(sym: Symbol) -> str:
    return sym.name if isinstance(sym, Tagged) else sym


def symbol_key(sym: Symbol) -> tuple[str, str]:
    if isinstance(sym, Tagged):
        return (sym.name, sym.side)
    return (sym, "")


def is_operator(sym: Symbol) -> bool:
    return _IDENT.match(symbol_name(sym)) is None


@dataclass(frozen=True)
class Term:
    head: Symbol
    args: tuple["Term", ...] = ()

    # terms are hashed constantly by the closure tables; cache hash and depth
    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.head, self.args))
            object.__setattr__(self, "_hash", h)
        return h

    def depth(self) -> int:
        d = self.__dict__.get("_depth")
        if d is None:
            d = 1 + max(a.depth() for a in self.args) if self.args else 1
            object.__setattr__(self, "_depth", d)
        return d

    def subterms(self) -> Iterator["Term"]:
        yield self
        for a in self.args:
            yield from a.subterms()

    def symbols(self) -> Iterator[Symbol]:
        yield self.head
        for a in self.args:
            yield from a.symbols()

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Var:
    """Metavariable placeholder; only legal inside schema patterns."""

    name: str

    def depth(self) -> int:
        return 1

    def subterms(self):
        yield self

    def symbols(self):
        return iter(())

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def terms(self) -> tuple[Term, ...]:
        return (self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"


@dataclass(frozen=True)
class PredApp:
    pred: Symbol
    args: tuple[Term, ...] = ()

    def terms(self) -> tuple[Term, ...]:
        return self.args

    def __str__(self) -> str:
        return format_pred(self)


Sentence = Union[Equation, PredApp]


def _fmt_head(sym: Symbol) -> str:
    # tags only show on leaves; heads of applications are printed bare
    return symbol_name(sym)


def format_term(t, _nested: bool = False) -> str:
    if isinstance(t, Var) or not t.args:
        return str(t.head) if isinstance(t, Term) else str(t)
    if len(t.args) == 2 and is_operator(t.head):
        s = f"{format_term(t.args[0], True)} {_fmt_head(t.head)} {format_term(t.args[1], True)}"
        return f"({s})" if _nested else s
    inner = ", ".join(format_term(a) for a in t.args)
    return f"{_fmt_head(t.head)}({inner})"


def format_pred(p: PredApp) -> str:
    if len(p.args) == 2 and is_operator(p.pred):
        return f"{format_term(p.args[0], True)} {_fmt_head(p.pred)} {format_term(p.args[1], True)}"
    if not p.args:
        return _fmt_head(p.pred)
    return f"{_fmt_head(p.pred)}({', '.join(format_term(a) for a in p.args)})"


def sentence_terms(s: Sentence) -> tuple[Term, ...]:
    return s.terms()


def sentence_symbols(s: Sentence) -> Iterator[Symbol]:
    if isinstance(s, PredApp):
        yield s.pred
    for t in s.terms():
        yield from t.symbols()


class EqSignature:
    """Constants, function symbols and predicate symbols with their arities.

    Declaration order is kept (the DSL printer relies on it) but equality is
    order-insensitive.
    """

    __slots__ = ("constants", "functions", "predicates", "_kind")

    def __init__(
        self,
        constants: Iterable[Symbol] = (),
        functions: Mapping[Symbol, int] | Iterable[tuple[Symbol, int]] = (),
        predicates: Mapping[Symbol, int] | Iterable[tuple[Symbol, int]] = (),
    ):
        consts = tuple(constants)
        funcs = tuple(dict(functions).items())
        preds = tuple(dict(predicates).items())
        kind: dict[Symbol, tuple[str, int]] = {}
        for c in consts:
            if c in kind:
                raise InvalidSignature(f"duplicate symbol {c!r}")
            kind[c] = ("const", 0)
        for f, n in funcs:
            if f in kind:
                raise InvalidSignature(f"duplicate symbol {f!r}")
            if n < 1:
                raise InvalidSignature(f"function {f!r} must have arity >= 1")
            kind[f] = ("func", n)
        for p, n in preds:
            if p in kind:
                raise InvalidSignature(f"duplicate symbol {p!r}")
            # zero-ary predicates are propositions (needed by LTL/CTL states)
            if n < 0:
                raise InvalidSignature(f"predicate {p!r} has negative arity")
            kind[p] = ("pred", n)
        object.__setattr__(self, "constants", consts)
        object.__setattr__(self, "functions", dict(funcs))
        object.__setattr__(self, "predicates", dict(preds))
        object.__setattr__(self, "_kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("EqSignature is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, EqSignature):
            return NotImplemented
        return self._kind == other._kind

    def __hash__(self) -> int:
        return hash(frozenset(self._kind.items()))

    def __repr__(self) -> str:
        return (
            f"EqSignature(constants={list(self.constants)!r}, "
            f"functions={self.functions!r}, predicates={self.predicates!r})"
        )

    def __contains__(self, sym) -> bool:
        return sym in self._kind

    def __len__(self) -> int:
        return len(self._kind)

    def kind(self, sym: Symbol) -> str:
        try:
            return self._kind[sym][0]
        except KeyError:
            raise UnknownSymbol(f"symbol {sym!r} is not declared") from None

    def arity(self, sym: Symbol) -> int:
        try:
            return self._kind[sym][1]
        except KeyError:
            raise UnknownSymbol(f"symbol {sym!r} is not declared") from None

    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(self._kind)

    def is_empty(self) -> bool:
        return not self._kind


EMPTY_SIGNATURE = EqSignature()


def mk_term(sig: EqSignature, symbol: Symbol, args: Iterable[Term] = ()) -> Term:
    args = tuple(args)
    kind = sig.kind(symbol)
    if kind == "pred":
        raise UnknownSymbol(f"{symbol!r} is a predicate, not a term former")
    if len(args) != sig.arity(symbol):
        raise ArityMismatch(
            f"{symbol!r} expects {sig.arity(symbol)} argument(s), got {len(args)}"
        )
    return Term(symbol, args)


def check_term(sig: EqSignature, t: Term) -> None:
    if isinstance(t, Var):
        raise UnknownSymbol(f"metavariable {t.name!r} in a ground position")
    kind = sig.kind(t.head)
    if kind == "pred":
        raise UnknownSymbol(f"predicate {t.head!r} used as a term")
    if len(t.args) != sig.arity(t.head):
        raise ArityMismatch(
            f"{t.head!r} expects {sig.arity(t.head)} argument(s), got {len(t.args)}"
        )
    for a in t.args:
        check_term(sig, a)


def check_sentence(sig: EqSignature, s: Sentence) -> None:
    if isinstance(s, Equation):
        check_term(sig, s.lhs)
        check_term(sig, s.rhs)
        return
    if sig.kind(s.pred) != "pred":
        raise UnknownSymbol(f"{s.pred!r} is not a predicate")
    if len(s.args) != sig.arity(s.pred):
        raise ArityMismatch(
            f"{s.pred!r} expects {sig.arity(s.pred)} argument(s), got {len(s.args)}"
        )
    for a in s.args:
        check_term(sig, a)


@dataclass(frozen=True)
class SigMorphism:
    """Total, arity-preserving symbol map between two signatures."""

    source: EqSignature
    target: EqSignature
    mapping: Mapping[Symbol, Symbol] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        m = dict(self.mapping)
        for sym in self.source.symbols():
            if sym not in m:
                raise SymbolNotInSource(f"morphism is not total: {sym!r} unmapped")
            img = m[sym]
            if self.target.kind(img) != self.source.kind(sym):
                raise SignatureMismatch(f"{sym!r} and {img!r} are different kinds")
            if self.target.arity(img) != self.source.arity(sym):
                raise ArityMismatch(f"{sym!r} -> {img!r} does not preserve arity")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, sig: EqSignature) -> "SigMorphism":
        return cls(sig, sig, {s: s for s in sig.symbols()})

    def __call__(self, sym: Symbol) -> Symbol:
        try:
            return self.mapping[sym]
        except KeyError:
            raise SymbolNotInSource(f"{sym!r} is not in the morphism source") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, SigMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and {s: self.mapping[s] for s in self.source.symbols()}
            == {s: other.mapping[s] for s in other.source.symbols()}
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    def term(self, t: Term) -> Term:
        return Term(self(t.head), tuple(self.term(a) for a in t.args))


def translate_term(m: SigMorphism, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return Term(m(t.head), tuple(translate_term(m, a) for a in t.args))


def translate_sentence(m: SigMorphism, s: Sentence) -> Sentence:
    if isinstance(s, Equation):
        return Equation(translate_term(m, s.lhs), translate_term(m, s.rhs))
    return PredApp(m(s.pred), tuple(translate_term(m, a) for a in s.args))


def compose_morphisms(m1: SigMorphism, m2: SigMorphism) -> SigMorphism:
    """``m2 . m1``: first apply ``m1`` then ``m2``."""
    if m1.target != m2.source:
        raise SignatureMismatch("target of the first morphism is not the source of the second")
    return SigMorphism(m1.source, m2.target, {s: m2(m1(s)) for s in m1.source.symbols()})


def tag_term(t: Term, side: str) -> Term:
    return Term(Tagged(side, t.head), tuple(tag_term(a, side) for a in t.args))


def untag_term(t: Term) -> Term:
    return Term(symbol_name(t.head), tuple(untag_term(a) for a in t.args))


@dataclass(frozen=True)
class SumSignature:
    """Coproduct of a rigid (``in_l``) and a flexible (``in_r``) signature."""

    left: EqSignature
    right: EqSignature

    @property
    def sig(self) -> EqSignature:
        cached = self.__dict__.get("_sig")
        if cached is None:
            cached = _build_sum(self.left, self.right)
            object.__setattr__(self, "_sig", cached)
        return cached

    def in_l(self) -> SigMorphism:
        return SigMorphism(self.left, self.sig, {s: Tagged(RIGID, s) for s in self.left.symbols()})

    def in_r(self) -> SigMorphism:
        return SigMorphism(self.right, self.sig, {s: Tagged(FLEXIBLE, s) for s in self.right.symbols()})

    def resolve(self, name: str) -> Tagged:
        """Tag a bare name; raises when the name is missing or ambiguous."""
        in_left, in_right = name in self.left, name in self.right
        if in_left and in_right:
            raise UnknownSymbol(f"{name!r} is ambiguous; write in_l({name}) or in_r({name})")
        if in_left:
            return Tagged(RIGID, name)
        if in_right:
            return Tagged(FLEXIBLE, name)
        raise UnknownSymbol(f"symbol {name!r} is not declared")


def _build_sum(left: EqSignature, right: EqSignature) -> EqSignature:
    consts = [Tagged(RIGID, c) for c in left.constants] + [Tagged(FLEXIBLE, c) for c in right.constants]
    funcs = [(Tagged(RIGID, f), n) for f, n in left.functions.items()]
    funcs += [(Tagged(FLEXIBLE, f), n) for f, n in right.functions.items()]
    preds = [(Tagged(RIGID, p), n) for p, n in left.predicates.items()]
    preds += [(Tagged(FLEXIBLE, p), n) for p, n in right.predicates.items()]
    return EqSignature(consts, funcs, preds)


def sum_signature(left: EqSignature, right: EqSignature) -> SumSignature:
    return SumSignature(left, right)


def sum_morphism(m_rigid: SigMorphism, m_flex: SigMorphism) -> SigMorphism:
    """``m_rigid + m_flex`` acting componentwise on a sum signature."""
    src = SumSignature(m_rigid.source, m_flex.source)
    dst = SumSignature(m_rigid.target, m_flex.target)
    mapping: dict[Symbol, Symbol] = {}
    for s in m_rigid.source.symbols():
        mapping[Tagged(RIGID, s)] = Tagged(RIGID, m_rigid(s))
    for s in m_flex.source.symbols():
        mapping[Tagged(FLEXIBLE, s)] = Tagged(FLEXIBLE, m_flex(s))
    return SigMorphism(src.sig, dst.sig, mapping)
