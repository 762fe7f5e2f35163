from __future__ import annotations

from relkit.entail import EntailBudget
from relkit.errors import InvalidFrame
from relkit.logics.common import AtomTable, QuantDomain, require_conditions, require_logic, x_variants
from relkit.logics.formulas import (
    FODL_NODES,
    And,
    Atom,
    Diamond,
    Exists,
    Formula,
    Not,
    Or,
    PAtom,
    Program,
    PSeq,
    PStar,
    PTest,
    PUnion,
    Top,
    program_atoms,
    subformulas,
)
from relkit.relalg.frame import Condition, FiniteFrame
from relkit.relalg.relation import Relation
from relkit.relalg.terms import RComp, RelTerm, RStar, RSym, RUnion
from relkit.theoria import InterpretationTheory
from relkit.verdict import FALSE, TRUE, Truth, Verdict, conj, disj, neg, unknown


def program_to_relterm(p: Program) -> RelTerm:
    """Embedding of test-free programs into relational terms."""
    if isinstance(p, PAtom):
        return RSym(p.name)
    if isinstance(p, PUnion):
        return RUnion(program_to_relterm(p.left), program_to_relterm(p.right))
    if isinstance(p, PSeq):
        return RComp(program_to_relterm(p.left), program_to_relterm(p.right))
    if isinstance(p, PStar):
        return RStar(program_to_relterm(p.arg))
    raise ValueError("tests have no relational-term counterpart")


def deterministic_conditions(programs) -> list[Condition]:
    out = []
    for a in sorted(set(programs)):
        out += [Condition.macro("total_program", a), Condition.macro("functional", a)]
    return out


class FodlModel:
    """Labels and program meanings over one (interpretation, frame) pair.

    A program denotes a pair of relations: pairs it certainly relates and
    pairs it possibly relates. They differ only when a test depends on an
    atom whose verdict is Unknown.
    """

    def __init__(self, i: InterpretationTheory, f: FiniteFrame, qd: QuantDomain | None, b: EntailBudget):
        self.f, self.qd = f, qd
        self.atoms = AtomTable(i, f, b)
        self._labels: dict[Formula, list[Verdict]] = {}
        self._progs: dict[Program, tuple[Relation, Relation]] = {}
        self._variants: dict[str, list[list[int]]] = {}

    def labels(self, phi: Formula) -> list[Verdict]:
        f = self.f
        for sub in subformulas(phi):
            if sub in self._labels:
                continue
            if isinstance(sub, Atom):
                lab = [self.atoms.at(s, sub.sentence) for s in f.base]
            elif isinstance(sub, Top):
                lab = [TRUE] * f.n
            elif isinstance(sub, Not):
                lab = [neg(v) for v in self._labels[sub.arg]]
            elif isinstance(sub, (Or, And)):
                op = disj if isinstance(sub, Or) else conj
                a, c = self._labels[sub.left], self._labels[sub.right]
                lab = [op((a[k], c[k])) for k in range(f.n)]
            elif isinstance(sub, Exists):
                a = self._labels[sub.arg]
                lab = [disj(a[t] for t in ts) for ts in self.variants(sub.var)]
            else:
                assert isinstance(sub, Diamond)
                lab = self._diamond(sub)
            self._labels[sub] = lab
        return self._labels[phi]

    def variants(self, x: str) -> list[list[int]]:
        v = self._variants.get(x)
        if v is None:
            f = self.f
            v = [[f.index[t] for t in x_variants(f, s, x, self.qd)] for s in f.base]
            self._variants[x] = v
        return v

    def _diamond(self, d: Diamond) -> list[Verdict]:
        lo, hi = self.meaning(d.program)
        a = self.labels(d.arg)
        out = []
        for k in range(self.f.n):
            if any(a[t].is_true for t in lo.successors(k)):
                out.append(TRUE)
                continue
            maybe = [a[t] for t in hi.successors(k) if not a[t].is_false]
            out.append(_first_unknown(maybe) if maybe else FALSE)
        return out

    def meaning(self, p: Program) -> tuple[Relation, Relation]:
        hit = self._progs.get(p)
        if hit is not None:
            return hit
        n = self.f.n
        if isinstance(p, PAtom):
            r = self.f.rel(p.name)
            m = (r, r)
        elif isinstance(p, PTest):
            lab = self.labels(p.cond)
            lo = Relation.from_pairs(n, ((k, k) for k in range(n) if lab[k].is_true))
            hi = Relation.from_pairs(n, ((k, k) for k in range(n) if not lab[k].is_false))
            m = (lo, hi)
        elif isinstance(p, PUnion):
            (a, b), (c, d) = self.meaning(p.left), self.meaning(p.right)
            m = (a | c, b | d)
        elif isinstance(p, PSeq):
            (a, b), (c, d) = self.meaning(p.left), self.meaning(p.right)
            m = (a.compose(c), b.compose(d))
        else:
            a, b = self.meaning(p.arg)
            m = (a.closure(), b.closure())
        self._progs[p] = m
        return m


def _first_unknown(vs: list[Verdict]) -> Verdict:
    for v in vs:
        if v.truth is Truth.UNKNOWN:
            return v
    # a possible successor whose program step itself is uncertain
    return unknown()


def fodl_check(
    i: InterpretationTheory,
    f: FiniteFrame,
    s: str,
    phi: Formula,
    qd: QuantDomain | None = None,
    b: EntailBudget = EntailBudget(),
    deterministic: bool = False,
) -> Verdict:
    require_logic(phi, FODL_NODES, "FODL")
    if s not in f.index:
        raise InvalidFrame(f"state {s!r} is not in the frame")
    programs = [a for sub in subformulas(phi) if isinstance(sub, Diamond) for a in program_atoms(sub.program)]
    for a in programs:
        f.rel(a)
    if deterministic:
        require_conditions(f, deterministic_conditions(programs))
    return FodlModel(i, f, qd, b).labels(phi)[f.index[s]]
