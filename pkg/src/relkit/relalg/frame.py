"""Finite frames, relational-term evaluation and first-order relational formulas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from relkit.eqcore import EMPTY_SIGNATURE, EqSignature
from relkit.errors import InvalidFrame, UnboundPointVariable, UnknownRelationSymbol
from relkit.relalg.relation import Relation
from relkit.relalg.terms import (
    IDENT,
    ONE,
    FAnd,
    FEq,
    FExists,
    FForall,
    FIff,
    FImp,
    FNot,
    FOr,
    FRel,
    RComp,
    RCompl,
    RConv,
    RelFormula,
    RelTerm,
    RIdent,
    RInter,
    ROne,
    RStar,
    RSym,
    RUnion,
    RZero,
    format_formula,
    free_vars,
)
from relkit.theoria import StateTheory


class FiniteFrame:
    """A non-empty base of state identifiers with named binary relations.

    Each identifier may resolve to a :class:`StateTheory`; identifiers without
    one denote the empty state over the frame's signatures.
    """

    def __init__(
        self,
        base: Iterable[str],
        rels: Mapping[str, Relation | Iterable[tuple[str, str]]] | None = None,
        states: Mapping[str, StateTheory] | None = None,
        flexible_sig: EqSignature | None = None,
        rigid_sig: EqSignature | None = None,
    ):
        self.base: tuple[str, ...] = tuple(base)
        if not self.base:
            raise InvalidFrame("frame base must be non-empty")
        if len(set(self.base)) != len(self.base):
            raise InvalidFrame("duplicate state identifier in frame base")
        self.index: dict[str, int] = {s: i for i, s in enumerate(self.base)}
        n = len(self.base)
        self.rels: dict[str, Relation] = {}
        for name, r in (rels or {}).items():
            if isinstance(r, Relation):
                if r.n != n:
                    raise InvalidFrame(f"relation {name} is over a base of size {r.n}, expected {n}")
                self.rels[name] = r
                continue
            pairs = []
            for a, b in r:
                if a not in self.index or b not in self.index:
                    raise InvalidFrame(f"relation {name} mentions a state outside the base: ({a}, {b})")
                pairs.append((self.index[a], self.index[b]))
            self.rels[name] = Relation.from_pairs(n, pairs)
        self.states: dict[str, StateTheory] = dict(states or {})
        if self.states and flexible_sig is None and rigid_sig is None:
            first = next(iter(self.states.values()))
            flexible_sig, rigid_sig = first.flexible_sig, first.rigid_sig
        self.flexible_sig = flexible_sig if flexible_sig is not None else EMPTY_SIGNATURE
        self.rigid_sig = rigid_sig if rigid_sig is not None else EMPTY_SIGNATURE
        for st, th in self.states.items():
            if st not in self.index:
                raise InvalidFrame(f"state theory given for unknown state {st}")
            if th.flexible_sig != self.flexible_sig or th.rigid_sig != self.rigid_sig:
                raise InvalidFrame(f"state {st} uses different signatures from the frame")

    @property
    def n(self) -> int:
        return len(self.base)

    def state(self, s: str) -> StateTheory:
        th = self.states.get(s)
        if th is None:
            if s not in self.index:
                raise InvalidFrame(f"unknown state {s}")
            th = StateTheory(self.flexible_sig, self.rigid_sig, ())
        return th

    def rel(self, name: str) -> Relation:
        try:
            return self.rels[name]
        except KeyError:
            raise UnknownRelationSymbol(f"relation symbol {name!r} is not declared") from None

    def pairs(self, name: str) -> list[tuple[str, str]]:
        return [(self.base[i], self.base[j]) for i, j in self.rel(name).pairs()]

    def successors(self, name: str, s: str) -> list[str]:
        return [self.base[j] for j in self.rel(name).successors(self.index[s])]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteFrame):
            return NotImplemented
        return (
            self.base == other.base
            and self.rels == other.rels
            and {s: self.state(s) for s in self.base} == {s: other.state(s) for s in other.base}
        )

    def __repr__(self) -> str:
        return f"FiniteFrame(base={list(self.base)!r}, rels={sorted(self.rels)!r})"


@dataclass(frozen=True)
class FrameMap:
    """Relation-symbol renaming plus a state map ``h`` from one frame to another."""

    rel_map: Mapping[str, str] = field(default_factory=dict, hash=False)
    h: Mapping[str, str] = field(default_factory=dict, hash=False)

    @classmethod
    def identity(cls, f: FiniteFrame) -> "FrameMap":
        return cls({r: r for r in f.rels}, {s: s for s in f.base})


def eval_relterm(f: FiniteFrame, t: RelTerm, cache: dict | None = None) -> Relation:
    if cache is not None:
        hit = cache.get(t)
        if hit is not None:
            return hit
    n = f.n
    if isinstance(t, RSym):
        r = f.rel(t.name)
    elif isinstance(t, RZero):
        r = Relation.empty(n)
    elif isinstance(t, ROne):
        r = Relation.full(n)
    elif isinstance(t, RIdent):
        r = Relation.identity(n)
    elif isinstance(t, RUnion):
        r = eval_relterm(f, t.left, cache) | eval_relterm(f, t.right, cache)
    elif isinstance(t, RInter):
        r = eval_relterm(f, t.left, cache) & eval_relterm(f, t.right, cache)
    elif isinstance(t, RComp):
        r = eval_relterm(f, t.left, cache).compose(eval_relterm(f, t.right, cache))
    elif isinstance(t, RCompl):
        r = eval_relterm(f, t.arg, cache).complement()
    elif isinstance(t, RConv):
        r = eval_relterm(f, t.arg, cache).converse()
    elif isinstance(t, RStar):
        r = eval_relterm(f, t.arg, cache).closure()
    else:
        raise TypeError(f"not a relational term: {t!r}")
    if cache is not None:
        cache[t] = r
    return r


def eval_formula(
    f: FiniteFrame,
    valuation: Mapping[str, str],
    phi: RelFormula,
    cache: dict | None = None,
) -> bool:
    missing = free_vars(phi) - set(valuation)
    if missing:
        raise UnboundPointVariable(f"unbound point variable(s) {sorted(missing)}")
    env = {}
    for v, s in valuation.items():
        if s not in f.index:
            raise InvalidFrame(f"valuation maps {v} to unknown state {s}")
        env[v] = f.index[s]
    return _eval(f, env, phi, {} if cache is None else cache)


def _eval(f: FiniteFrame, env: dict[str, int], phi: RelFormula, cache: dict) -> bool:
    if isinstance(phi, FRel):
        return (env[phi.x], env[phi.y]) in eval_relterm(f, phi.term, cache)
    if isinstance(phi, FEq):
        return eval_relterm(f, phi.left, cache) == eval_relterm(f, phi.right, cache)
    if isinstance(phi, FNot):
        return not _eval(f, env, phi.arg, cache)
    if isinstance(phi, FOr):
        return any(_eval(f, env, a, cache) for a in phi.args)
    if isinstance(phi, FAnd):
        return all(_eval(f, env, a, cache) for a in phi.args)
    if isinstance(phi, FImp):
        return not _eval(f, env, phi.left, cache) or _eval(f, env, phi.right, cache)
    if isinstance(phi, FIff):
        return _eval(f, env, phi.left, cache) == _eval(f, env, phi.right, cache)
    if isinstance(phi, (FExists, FForall)):
        want = isinstance(phi, FExists)
        for point in itertools.product(range(f.n), repeat=len(phi.vars)):
            inner = dict(env)
            inner.update(zip(phi.vars, point))
            if _eval(f, inner, phi.body, cache) == want:
                return want
        return not want
    raise TypeError(f"not a relational formula: {phi!r}")


def _counterexample(f: FiniteFrame, env: dict[str, int], phi: RelFormula, cache: dict) -> dict[str, int] | None:
    """A falsifying assignment for the outer universal block of a false sentence."""
    while isinstance(phi, FForall):
        for point in itertools.product(range(f.n), repeat=len(phi.vars)):
            inner = dict(env)
            inner.update(zip(phi.vars, point))
            if not _eval(f, inner, phi.body, cache):
                env = inner
                break
        phi = phi.body
    return env or None


# frame-condition macros


def total(rel: str) -> RelFormula:
    t = RSym(rel)
    return FForall(("x", "y"), FIff(FRel("x", RInter(RComp(t, ONE), IDENT), "y"), FRel("x", IDENT, "y")))


def total_program(rel: str) -> RelFormula:
    t = RSym(rel)
    return FForall(
        ("x", "y"), FIff(FRel("x", RInter(RComp(t, RConv(t)), IDENT), "y"), FRel("x", IDENT, "y"))
    )


def functional(rel: str) -> RelFormula:
    t = RSym(rel)
    return FForall(("x", "y"), FImp(FRel("x", RComp(RConv(t), t), "y"), FRel("x", IDENT, "y")))


def initial(rel: str) -> RelFormula:
    return FForall(("x", "y"), FImp(FRel("x", RSym(rel), "y"), FRel("x", IDENT, "y")))


MACROS = {
    "total": total,
    "total_program": total_program,
    "functional": functional,
    "initial": initial,
}


@dataclass(frozen=True)
class Condition:
    label: str
    formula: RelFormula

    @classmethod
    def macro(cls, name: str, rel: str) -> "Condition":
        return cls(f"{name} {rel}", MACROS[name](rel))


@dataclass(frozen=True)
class ConditionResult:
    label: str
    formula: str
    passed: bool
    witness: dict[str, str] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FrameReport:
    results: tuple[ConditionResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results if not r.passed]

    def __iter__(self) -> Iterator[ConditionResult]:
        return iter(self.results)


def verify_frame_conditions(
    f: FiniteFrame, gamma: Iterable[Condition | RelFormula]
) -> FrameReport:
    cache: dict = {}
    out = []
    for c in gamma:
        if not isinstance(c, Condition):
            c = Condition(format_formula(c), c)
        if free_vars(c.formula):
            raise UnboundPointVariable(f"condition {c.label!r} is not a sentence")
        ok = _eval(f, {}, c.formula, cache)
        witness = None
        if not ok:
            env = _counterexample(f, {}, c.formula, cache)
            if env:
                witness = {v: f.base[i] for v, i in env.items()}
        out.append(ConditionResult(c.label, format_formula(c.formula), ok, witness))
    return FrameReport(tuple(out))
