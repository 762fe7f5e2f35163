"""Plumbing shared by the checkers: atoms, lassos, quantifier domains, frame conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from relkit.entail import EntailBudget
from relkit.eqcore import (
    FLEXIBLE,
    Equation,
    PredApp,
    Sentence,
    SumSignature,
    Tagged,
    Term,
    check_sentence,
    check_term,
)
from relkit.errors import (
    EmptyQuantDomain,
    FrameConditionViolated,
    InvalidPath,
    NotAStateFormula,
    UnknownFlexibleSymbol,
    UnknownSymbol,
    UnsupportedOperator,
)
from relkit.logics.formulas import (
    And,
    Atom,
    Formula,
    Next,
    Not,
    Or,
    Release,
    Top,
    Until,
    subformulas,
    uses_only,
)
from relkit.relalg.frame import Condition, FiniteFrame, verify_frame_conditions
from relkit.theoria import ConstDef, InterpretationTheory, sat_state
from relkit.verdict import FALSE, TRUE, Verdict, conj, disj, neg

LOGICS = ("ltl", "ctl", "fodl", "foctlstar")


def _tag(sigma: SumSignature, sym) -> Tagged:
    return sym if isinstance(sym, Tagged) else sigma.resolve(sym)


def _tag_term(sigma: SumSignature, t: Term) -> Term:
    return Term(_tag(sigma, t.head), tuple(_tag_term(sigma, a) for a in t.args))


def rho_translate(logic: str, sigma: SumSignature, state_atom) -> Sentence:
    """Tag a state atom over ``sigma``; bare names are resolved rigid or flexible.

    A string is read as a proposition, i.e. a zero-arity flexible predicate.
    """
    if logic not in LOGICS:
        raise ValueError(f"unknown logic {logic!r}")
    if isinstance(state_atom, Atom):
        state_atom = state_atom.sentence
    if isinstance(state_atom, str):
        flex = sigma.right
        if state_atom not in flex or flex.kind(state_atom) != "pred" or flex.arity(state_atom):
            raise UnknownSymbol(f"{state_atom!r} is not a flexible proposition")
        out: Sentence = PredApp(Tagged(FLEXIBLE, state_atom), ())
    elif isinstance(state_atom, Equation):
        out = Equation(_tag_term(sigma, state_atom.lhs), _tag_term(sigma, state_atom.rhs))
    elif isinstance(state_atom, PredApp):
        out = PredApp(_tag(sigma, state_atom.pred), tuple(_tag_term(sigma, a) for a in state_atom.args))
    else:
        raise NotAStateFormula(f"{state_atom!r} is not a state atom")
    check_sentence(sigma.sig, out)
    return out


class AtomTable:
    """Memoised ``sat_state`` verdicts, private to one checker call."""

    def __init__(self, i: InterpretationTheory, f: FiniteFrame, b: EntailBudget):
        self.i, self.f, self.b = i, f, b
        self._memo: dict[tuple[str, Sentence], Verdict] = {}

    def at(self, state: str, sentence: Sentence) -> Verdict:
        key = (state, sentence)
        v = self._memo.get(key)
        if v is None:
            v = sat_state(self.i, self.f.state(state), sentence, self.b)
            self._memo[key] = v
        return v


def require_conditions(f: FiniteFrame, conditions: Iterable[Condition]) -> None:
    for r in verify_frame_conditions(f, conditions):
        if not r.passed:
            raise FrameConditionViolated(r.label, r.witness)


def require_logic(phi: Formula, allowed: tuple, logic: str) -> None:
    if not uses_only(phi, allowed):
        bad = next(type(s).__name__ for s in subformulas(phi) if not isinstance(s, allowed))
        raise UnsupportedOperator(f"{bad} is not a {logic} connective")


@dataclass(frozen=True)
class LassoPath:
    """The infinite path ``prefix . cycle . cycle . ...``."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise InvalidPath("lasso cycle must be non-empty")

    @property
    def positions(self) -> tuple[str, ...]:
        return self.prefix + self.cycle

    def __len__(self) -> int:
        return len(self.prefix) + len(self.cycle)

    def succ(self, k: int) -> int:
        return k + 1 if k + 1 < len(self) else len(self.prefix)

    def at(self, i: int) -> str:
        """State at index ``i`` of the infinite unfolding."""
        p = len(self.prefix)
        return self.prefix[i] if i < p else self.cycle[(i - p) % len(self.cycle)]

    def validate(self, f: FiniteFrame, rel: str = "T") -> None:
        r = f.rel(rel)
        seq = self.positions
        for s in seq:
            if s not in f.index:
                raise InvalidPath(f"state {s!r} is not in the frame")
        for k, s in enumerate(seq):
            t = seq[self.succ(k)]
            if (f.index[s], f.index[t]) not in r:
                raise InvalidPath(f"{s} -> {t} is not a {rel} step")


def ltl_conditions(f: FiniteFrame, rel: str = "T") -> list[Condition]:
    conds = [Condition.macro("total", rel), Condition.macro("functional", rel)]
    if "St0" in f.rels:
        conds.append(Condition.macro("initial", "St0"))
    return conds


def path_from(f: FiniteFrame, start: str, rel: str = "T") -> LassoPath:
    require_conditions(f, ltl_conditions(f, rel))
    if start not in f.index:
        raise InvalidPath(f"state {start!r} is not in the frame")
    seen: dict[str, int] = {}
    seq: list[str] = []
    s = start
    while s not in seen:
        seen[s] = len(seq)
        seq.append(s)
        (s,) = f.successors(rel, s)
    k = seen[s]
    return LassoPath(tuple(seq[:k]), tuple(seq[k:]))


@dataclass(frozen=True)
class QuantDomain:
    """Finite range of rigid ground terms for each quantifiable flexible constant."""

    ranges: Mapping[str, tuple[Term, ...]] = field(default_factory=dict, hash=False)

    def terms(self, x: str) -> tuple[Term, ...]:
        ts = tuple(self.ranges.get(x, ()))
        if not ts:
            raise EmptyQuantDomain(f"no quantifier domain given for {x!r}")
        return ts

    def validate(self, rigid_sig) -> None:
        for ts in self.ranges.values():
            for t in ts:
                check_term(rigid_sig, t)


def x_variants(f: FiniteFrame, s: str, x: str, qd: QuantDomain | None) -> list[str]:
    """Frame states agreeing with ``s`` off ``x`` and defining ``x`` from the domain."""
    if x not in f.flexible_sig or f.flexible_sig.kind(x) != "const":
        raise UnknownFlexibleSymbol(f"{x!r} is not a flexible constant")
    allowed = set((qd or QuantDomain()).terms(x))
    rest = frozenset(d for d in f.state(s).defs if d.symbol != x)
    out = []
    for t in f.base:
        defs = f.state(t).defs
        xdefs = [d for d in defs if d.symbol == x]
        if not xdefs or any(not isinstance(d, ConstDef) or d.rhs not in allowed for d in xdefs):
            continue
        if frozenset(d for d in defs if d.symbol != x) == rest:
            out.append(t)
    return out


def lasso_labels(
    pi: LassoPath,
    phi: Formula,
    state_label: Callable[[Formula, str], Verdict],
) -> dict[Formula, list[Verdict]]:
    """Three-valued truth of every subformula at every lasso position.

    ``state_label`` supplies the leaves (atoms and any state-level node the
    caller handles itself). U is a least and R a greatest fixpoint.
    """
    seq = pi.positions
    n = len(seq)
    succ = [pi.succ(k) for k in range(n)]
    lab: dict[Formula, list[Verdict]] = {}
    for sub in subformulas(phi):
        if sub in lab:
            continue
        if isinstance(sub, Top):
            lab[sub] = [TRUE] * n
        elif isinstance(sub, Not):
            lab[sub] = [neg(v) for v in lab[sub.arg]]
        elif isinstance(sub, Or):
            a, b = lab[sub.left], lab[sub.right]
            lab[sub] = [disj((a[k], b[k])) for k in range(n)]
        elif isinstance(sub, And):
            a, b = lab[sub.left], lab[sub.right]
            lab[sub] = [conj((a[k], b[k])) for k in range(n)]
        elif isinstance(sub, Next):
            a = lab[sub.arg]
            lab[sub] = [a[succ[k]] for k in range(n)]
        elif isinstance(sub, (Until, Release)):
            lab[sub] = _fixpoint(lab[sub.left], lab[sub.right], succ, isinstance(sub, Until))
        else:
            lab[sub] = [state_label(sub, seq[k]) for k in range(n)]
    return lab


def _fixpoint(a: Sequence[Verdict], b: Sequence[Verdict], succ: Sequence[int], least: bool) -> list[Verdict]:
    n = len(a)
    val = [FALSE if least else TRUE] * n
    while True:
        changed = False
        for k in reversed(range(n)):
            if least:
                v = disj((b[k], conj((a[k], val[succ[k]]))))
            else:
                v = conj((b[k], disj((a[k], val[succ[k]]))))
            if v.truth is not val[k].truth:
                changed = True
            val[k] = v
        if not changed:
            return val
