"""Ground equational entailment by congruence closure.

Schematic axiom families (``{0 + t = t}`` for every ground ``t``) are
finitised by instantiating their metavariables with every ground term up to a
depth bound, enumerated by depth and then by symbol name.  A goal that is not
reached is reported as unknown whenever schemas were involved, since a larger
budget might still derive it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from relkit.eqcore import (
    EqSignature,
    Equation,
    PredApp,
    Sentence,
    SumSignature,
    Term,
    Var,
    check_sentence,
    symbol_key,
)
from relkit.errors import (
    ArityMismatch,
    BudgetZeroWithSchemas,
    IllFormedGoal,
    RelkitError,
    UnknownSymbol,
)
from relkit.verdict import BUDGET_EXHAUSTED, FALSE, TRUE, Verdict, unknown


@dataclass(frozen=True)
class SchemaSentence:
    metavars: tuple[str, ...]
    body: Sentence
    guards: tuple[tuple[str, Term], ...] = ()
    # metavariables range over ground terms of this signature (default: the theory's)
    range_sig: EqSignature | None = None

    def __post_init__(self):
        object.__setattr__(self, "guards", tuple(self.guards))
        declared = set(self.metavars)
        if len(declared) != len(self.metavars):
            raise RelkitError("duplicate metavariable in schema")
        used = {v.name for v in _pattern_vars(self.body)}
        missing = used - declared
        if missing:
            raise RelkitError(f"undeclared metavariable(s) {sorted(missing)}")
        for var, _ in self.guards:
            if var not in declared:
                raise RelkitError(f"guard on undeclared metavariable {var!r}")

    def instantiate(self, subst: dict[str, Term]) -> Sentence:
        return _subst_sentence(self.body, subst)

    def admits(self, subst: dict[str, Term]) -> bool:
        return all(subst[v] != t for v, t in self.guards)

    def __str__(self) -> str:
        guard = ""
        if self.guards:
            guard = " where " + ", ".join(f"{v} != {t}" for v, t in self.guards)
        return f"[{', '.join(self.metavars)}{guard}] {self.body}"


def _pattern_vars(s: Sentence) -> Iterator[Var]:
    for t in s.terms():
        for sub in t.subterms():
            if isinstance(sub, Var):
                yield sub


def _subst_term(t, subst: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return subst[t.name]
    if not t.args:
        return t
    return Term(t.head, tuple(_subst_term(a, subst) for a in t.args))


def _subst_sentence(s: Sentence, subst: dict[str, Term]) -> Sentence:
    if isinstance(s, Equation):
        return Equation(_subst_term(s.lhs, subst), _subst_term(s.rhs, subst))
    return PredApp(s.pred, tuple(_subst_term(a, subst) for a in s.args))


def _as_sig(signature) -> EqSignature:
    return signature.sig if isinstance(signature, SumSignature) else signature


def check_schema(sig: EqSignature, schema: SchemaSentence) -> None:
    """Well-formedness of a schema: instantiate every metavariable with a fresh
    probe constant and check the resulting sentence."""
    probe_names = {v: f"\0{v}" for v in schema.metavars}
    probe_sig = EqSignature(
        tuple(sig.constants) + tuple(probe_names.values()),
        sig.functions,
        sig.predicates,
    )
    subst = {v: Term(p) for v, p in probe_names.items()}
    check_sentence(probe_sig, schema.instantiate(subst))
    for _, t in schema.guards:
        check_sentence(sig, Equation(t, t))
    if schema.range_sig is not None:
        for sym in schema.range_sig.symbols():
            if sym not in sig or sig.arity(sym) != schema.range_sig.arity(sym):
                raise UnknownSymbol(f"schema range symbol {sym!r} not in the theory signature")


@dataclass(frozen=True)
class TheoryPres:
    signature: EqSignature | SumSignature
    ground_axioms: tuple[Sentence, ...] = ()
    schemas: tuple[SchemaSentence, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ground_axioms", tuple(self.ground_axioms))
        object.__setattr__(self, "schemas", tuple(self.schemas))
        sig = self.sig
        for ax in self.ground_axioms:
            check_sentence(sig, ax)
        for sc in self.schemas:
            check_schema(sig, sc)

    @property
    def sig(self) -> EqSignature:
        return _as_sig(self.signature)


@dataclass(frozen=True)
class EntailBudget:
    max_term_depth: int = 3
    max_instantiations: int = 10000

    def __post_init__(self):
        if self.max_term_depth < 0:
            raise ValueError("max_term_depth must be nonnegative")
        if self.max_instantiations < 0:
            raise ValueError("max_instantiations must be nonnegative")


def term_key(t: Term):
    return (symbol_key(t.head), tuple(term_key(a) for a in t.args))


class GroundUniverse:
    """Ground terms of a signature, level by level (level = term depth)."""

    def __init__(self, sig: EqSignature):
        self.sig = sig
        self._levels: list[list[Term]] = []
        self.depth: dict[Term, int] = {}
        self._funcs = sorted(sig.functions.items(), key=lambda kv: symbol_key(kv[0]))

    def level(self, d: int) -> list[Term]:
        while len(self._levels) < d:
            terms = self._next_level()
            self._levels.append(terms)
            for t in terms:
                self.depth[t] = len(self._levels)
        return self._levels[d - 1]

    def upto(self, d: int) -> list[Term]:
        out: list[Term] = []
        for k in range(1, d + 1):
            out.extend(self.level(k))
        return out

    def _next_level(self) -> list[Term]:
        k = len(self._levels) + 1
        if k == 1:
            terms = [Term(c) for c in self.sig.constants]
            return sorted(terms, key=term_key)
        below = self.upto(k - 1)
        top = set(self._levels[-1])
        out = []
        for f, n in self._funcs:
            for args in itertools.product(below, repeat=n):
                if any(a in top for a in args):
                    out.append(Term(f, args))
        out.sort(key=term_key)
        return out


def _instances(theory: TheoryPres, budget: EntailBudget) -> tuple[list[Sentence], bool]:
    out: list[Sentence] = []
    seen: set = set()
    for ax in theory.ground_axioms:
        if ax not in seen:
            seen.add(ax)
            out.append(ax)
    if not theory.schemas:
        return out, False
    if budget.max_instantiations == 0:
        raise BudgetZeroWithSchemas("schemas present but max_instantiations is 0")
    universes: dict[EqSignature, GroundUniverse] = {}
    for schema in theory.schemas:
        rs = schema.range_sig if schema.range_sig is not None else theory.sig
        universes.setdefault(rs, GroundUniverse(rs))
    count = 0
    for level in range(1, budget.max_term_depth + 1):
        for schema in theory.schemas:
            rs = schema.range_sig if schema.range_sig is not None else theory.sig
            pool = universes[rs].upto(level)
            if not pool:
                continue
            depth = universes[rs].depth
            k = len(schema.metavars)
            if k == 0:
                if level != 1:
                    continue
                combos: Iterable[tuple] = [()]
            else:
                combos = itertools.product(pool, repeat=k)
            for combo in combos:
                if k and max(depth[t] for t in combo) != level:
                    continue
                subst = dict(zip(schema.metavars, combo))
                if not schema.admits(subst):
                    continue
                inst = schema.instantiate(subst)
                count += 1
                if inst not in seen:
                    seen.add(inst)
                    out.append(inst)
                if count >= budget.max_instantiations:
                    return out, True
    return out, False


def instantiate_schemas(theory: TheoryPres, budget: EntailBudget) -> tuple[Sentence, ...]:
    return tuple(_instances(theory, budget)[0])


class CongruenceClosure:
    """Union-find over term nodes with signature-table congruence propagation."""

    def __init__(self):
        self._ids: dict[Term, int] = {}
        self._head: list = []
        self._args: list[tuple[int, ...]] = []
        self._parent: list[int] = []
        self._size: list[int] = []
        self._uses: list[list[int]] = []
        self._table: dict = {}
        self._pending: list[tuple[int, int]] = []
        self._facts: list[tuple] = []
        self._fact_set: set | None = None

    def find(self, i: int) -> int:
        parent = self._parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def add(self, t: Term) -> int:
        tid = self._ids.get(t)
        if tid is not None:
            return tid
        args = tuple(self.add(a) for a in t.args)
        tid = len(self._head)
        self._ids[t] = tid
        self._head.append(t.head)
        self._args.append(args)
        self._parent.append(tid)
        self._size.append(1)
        self._uses.append([])
        if args:
            for a in set(self.find(a) for a in args):
                self._uses[a].append(tid)
            key = (t.head, tuple(self.find(a) for a in args))
            other = self._table.get(key)
            if other is None:
                self._table[key] = tid
            else:
                self._pending.append((tid, other))
                self._propagate()
        return tid

    def merge(self, s: Term, t: Term) -> None:
        self._pending.append((self.add(s), self.add(t)))
        self._propagate()

    def _propagate(self) -> None:
        pending = self._pending
        while pending:
            a, b = pending.pop()
            ra, rb = self.find(a), self.find(b)
            if ra == rb:
                continue
            if self._size[ra] < self._size[rb]:
                ra, rb = rb, ra
            self._parent[rb] = ra
            self._size[ra] += self._size[rb]
            self._fact_set = None
            moved = self._uses[rb]
            self._uses[rb] = []
            for u in moved:
                key = (self._head[u], tuple(self.find(x) for x in self._args[u]))
                other = self._table.get(key)
                if other is None:
                    self._table[key] = u
                elif self.find(other) != self.find(u):
                    pending.append((u, other))
            self._uses[ra].extend(moved)

    def assert_fact(self, p: PredApp) -> None:
        ids = tuple(self.add(a) for a in p.args)
        self._facts.append((p.pred, ids))
        self._fact_set = None

    def add_sentence(self, s: Sentence) -> None:
        if isinstance(s, Equation):
            self.merge(s.lhs, s.rhs)
        else:
            self.assert_fact(s)

    def equal(self, s: Term, t: Term) -> bool:
        # adding t may merge s's class, so add both before reading roots
        i, j = self.add(s), self.add(t)
        return self.find(i) == self.find(j)

    def holds(self, p: PredApp) -> bool:
        added = [self.add(a) for a in p.args]
        ids = tuple(self.find(i) for i in added)
        if self._fact_set is None:
            self._fact_set = {
                (pred, tuple(self.find(i) for i in args)) for pred, args in self._facts
            }
        return (p.pred, ids) in self._fact_set

    def derives(self, s: Sentence) -> bool:
        if isinstance(s, Equation):
            return self.equal(s.lhs, s.rhs)
        return self.holds(s)

    def classes(self) -> list[set[Term]]:
        groups: dict[int, set[Term]] = {}
        for t, i in self._ids.items():
            groups.setdefault(self.find(i), set()).add(t)
        return list(groups.values())

    def facts(self) -> set[tuple]:
        """Derived predicate facts, one representative argument tuple per class tuple."""
        rep_term = {}
        for t, i in self._ids.items():
            rep_term.setdefault(self.find(i), t)
        return {
            (pred, tuple(rep_term[self.find(i)] for i in args)) for pred, args in self._facts
        }

    def universe(self) -> set[Term]:
        return set(self._ids)


def congruence_close(sentences: Iterable[Sentence], universe: Iterable[Term] = ()) -> CongruenceClosure:
    cc = CongruenceClosure()
    for t in universe:
        cc.add(t)
    for s in sentences:
        for t in s.terms():
            cc.add(t)
    for s in sentences:
        cc.add_sentence(s)
    return cc


class Prover:
    """A theory closed once under its (budgeted) instances, queried many times."""

    def __init__(self, theory: TheoryPres, budget: EntailBudget):
        self.theory = theory
        self.budget = budget
        sentences, self.truncated = _instances(theory, budget)
        self.n_instances = len(sentences) - len(theory.ground_axioms)
        self._cc = congruence_close(sentences)

    def check(self, goal: Sentence) -> Verdict:
        try:
            check_sentence(self.theory.sig, goal)
        except (UnknownSymbol, ArityMismatch) as exc:
            raise IllFormedGoal(str(exc)) from None
        if self._cc.derives(goal):
            return TRUE
        if self.theory.schemas:
            return unknown(BUDGET_EXHAUSTED)
        return FALSE


@lru_cache(maxsize=128)
def prover(theory: TheoryPres, budget: EntailBudget) -> Prover:
    return Prover(theory, budget)


def entails(theory: TheoryPres, goal: Sentence, budget: EntailBudget = EntailBudget()) -> Verdict:
    return prover(theory, budget).check(goal)
