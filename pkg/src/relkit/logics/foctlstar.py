"""First-order CTL* over finite frames.

``E psi`` is decided on the product of the frame with truth assignments to the
temporal subformulae of ``psi``: a path satisfies ``psi`` exactly when the
product has a run from a node that makes ``psi`` true, ending in a strongly
connected component that discharges every pending until-obligation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx

from relkit.entail import EntailBudget
from relkit.errors import InvalidFrame, NotAStateFormula
from relkit.logics.common import (
    AtomTable,
    LassoPath,
    QuantDomain,
    lasso_labels,
    require_conditions,
    require_logic,
    x_variants,
)
from relkit.logics.formulas import (
    FOCTLSTAR_NODES,
    And,
    Atom,
    E,
    Exists,
    Formula,
    Next,
    Not,
    Or,
    Release,
    Top,
    Until,
    children,
    subformulas,
)
from relkit.relalg.frame import Condition, FiniteFrame
from relkit.theoria import InterpretationTheory
from relkit.verdict import BUDGET_EXHAUSTED, FALSE, TRUE, Verdict, conj, disj, neg, unknown


def is_state_formula(phi: Formula) -> bool:
    if isinstance(phi, (Atom, Top, Exists, E)):
        return True
    if isinstance(phi, Not):
        return is_state_formula(phi.arg)
    if isinstance(phi, (Or, And)):
        return is_state_formula(phi.left) and is_state_formula(phi.right)
    return False


def check_sorts(phi: Formula) -> None:
    """Quantified bodies must be state formulae; anything may sit under E."""
    for sub in subformulas(phi):
        if isinstance(sub, Exists) and not is_state_formula(sub.arg):
            raise NotAStateFormula("the body of exists must be a state formula")


def temporal_subformulas(psi: Formula) -> list[Formula]:
    """Distinct X/U subformulae of ``psi`` that are not inside a nested state formula."""
    out: list[Formula] = []

    def walk(node: Formula) -> None:
        if is_state_formula(node):
            return
        for c in children(node):
            walk(c)
        if isinstance(node, (Next, Until, Release)) and node not in out:
            out.append(node)

    walk(psi)
    return out


def completeness_threshold(n: int, psi: Formula) -> int:
    return n * 2 ** len(temporal_subformulas(psi))


@dataclass(frozen=True)
class _Lit:
    state_formula: Formula


def _nnf(psi: Formula, positive: bool = True) -> Formula:
    """Negation normal form over path connectives; state formulae become literals."""
    if is_state_formula(psi):
        return _Lit(psi if positive else Not(psi))
    if isinstance(psi, Not):
        return _nnf(psi.arg, not positive)
    if isinstance(psi, (Or, And)):
        keep = isinstance(psi, Or) == positive
        return (Or if keep else And)(_nnf(psi.left, positive), _nnf(psi.right, positive))
    if isinstance(psi, Next):
        return Next(_nnf(psi.arg, positive))
    if isinstance(psi, (Until, Release)):
        keep = isinstance(psi, Until) == positive
        return (Until if keep else Release)(_nnf(psi.left, positive), _nnf(psi.right, positive))
    raise NotAStateFormula(f"unexpected node {type(psi).__name__} in a path formula")


def _nnf_nodes(node: Formula) -> list[Formula]:
    if isinstance(node, _Lit):
        return [node]
    out: list[Formula] = []
    for c in children(node):
        out += _nnf_nodes(c)
    out.append(node)
    return out


class _Product:
    """Product graph for one NNF path formula under one boolean reading of its literals."""

    def __init__(self, root: Formula, succ: list[list[int]], lit: dict[_Lit, list[bool]]):
        self.root = root
        self.succ = succ
        self.lit = lit
        nodes = _nnf_nodes(root)
        self.temps = list(dict.fromkeys(x for x in nodes if isinstance(x, (Next, Until, Release))))
        self.bit = {t: 1 << j for j, t in enumerate(self.temps)}
        n, m = len(succ), len(self.temps)
        g = nx.DiGraph()
        for k in range(n):
            for v in range(1 << m):
                g.add_node((k, v))
                for t in succ[k]:
                    for w in range(1 << m):
                        if self._step_ok(k, v, t, w):
                            g.add_edge((k, v), (t, w))
        self.graph = g
        self.fair_sccs: list[set] = []
        for comp in nx.strongly_connected_components(g):
            if len(comp) == 1:
                (x,) = comp
                if not g.has_edge(x, x):
                    continue
            if all(any(self._discharged(c, x) for x in comp) for c in self._obligations()):
                self.fair_sccs.append(comp)
        fair = set().union(*self.fair_sccs) if self.fair_sccs else set()
        self.live = set(fair)
        q = deque(fair)
        while q:
            for y in g.predecessors(q.popleft()):
                if y not in self.live:
                    self.live.add(y)
                    q.append(y)
        self.scc_of = {x: i for i, c in enumerate(self.fair_sccs) for x in c}

    def ev(self, node: Formula, k: int, v: int) -> bool:
        if isinstance(node, _Lit):
            return self.lit[node][k]
        if isinstance(node, Or):
            return self.ev(node.left, k, v) or self.ev(node.right, k, v)
        if isinstance(node, And):
            return self.ev(node.left, k, v) and self.ev(node.right, k, v)
        return bool(v & self.bit[node])

    def _step_ok(self, k: int, v: int, t: int, w: int) -> bool:
        for node in self.temps:
            now = bool(v & self.bit[node])
            later = bool(w & self.bit[node])
            if isinstance(node, Next):
                want = self.ev(node.arg, t, w)
            elif isinstance(node, Until):
                want = self.ev(node.right, k, v) or (self.ev(node.left, k, v) and later)
            else:
                want = self.ev(node.right, k, v) and (self.ev(node.left, k, v) or later)
            if now != want:
                return False
        return True

    def _obligations(self) -> list[Formula]:
        return [t for t in self.temps if isinstance(t, (Until, Release))]

    def _discharged(self, node: Formula, x: tuple[int, int]) -> bool:
        k, v = x
        held = bool(v & self.bit[node])
        right = self.ev(node.right, k, v)
        if isinstance(node, Until):
            return not held or right
        return held or not right

    def starts(self, k: int) -> list[tuple[int, int]]:
        return [(k, v) for v in range(1 << len(self.temps)) if self.ev(self.root, k, v)]

    def holds_at(self, k: int) -> bool:
        return any(x in self.live for x in self.starts(k))

    def witness(self, k: int) -> LassoPath | None:
        """A lasso of frame-state indices realising a run from ``k``, or None."""
        starts = [x for x in self.starts(k) if x in self.live]
        if not starts:
            return None
        stem = self._bfs(starts, lambda x: x in self.scc_of, None)
        entry = stem[-1]
        comp = self.fair_sccs[self.scc_of[entry]]
        walk = [entry]
        for ob in self._obligations():
            if any(self._discharged(ob, x) for x in walk):
                continue
            walk += self._bfs([walk[-1]], lambda x, ob=ob: self._discharged(ob, x), comp)[1:]
        if len(walk) == 1:
            step = next(y for y in self.graph.successors(entry) if y in comp)
            walk.append(step)
        if walk[-1] != entry:
            walk += self._bfs([walk[-1]], lambda x: x == entry, comp)[1:]
        return LassoPath(tuple(x[0] for x in stem[:-1]), tuple(x[0] for x in walk[:-1]))

    def _bfs(self, sources, goal, within) -> list:
        prev = {s: None for s in sources}
        q = deque(sources)
        while q:
            x = q.popleft()
            if goal(x):
                path = [x]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            for y in self.graph.successors(x):
                if within is not None and y not in within:
                    continue
                if y not in prev:
                    prev[y] = x
                    q.append(y)
        raise AssertionError("no path inside a component that should be connected")


class FoctlModel:
    def __init__(
        self,
        i: InterpretationTheory,
        f: FiniteFrame,
        qd: QuantDomain | None,
        b: EntailBudget,
        bound: int,
        rel: str,
    ):
        self.f, self.qd, self.bound = f, qd, bound
        self.atoms = AtomTable(i, f, b)
        r = f.rel(rel)
        self.succ = [r.successors(k) for k in range(f.n)]
        self._labels: dict[Formula, list[Verdict]] = {}

    def labels(self, phi: Formula) -> list[Verdict]:
        hit = self._labels.get(phi)
        if hit is not None:
            return hit
        f = self.f
        if isinstance(phi, Atom):
            lab = [self.atoms.at(s, phi.sentence) for s in f.base]
        elif isinstance(phi, Top):
            lab = [TRUE] * f.n
        elif isinstance(phi, Not):
            lab = [neg(v) for v in self.labels(phi.arg)]
        elif isinstance(phi, (Or, And)):
            op = disj if isinstance(phi, Or) else conj
            a, c = self.labels(phi.left), self.labels(phi.right)
            lab = [op((a[k], c[k])) for k in range(f.n)]
        elif isinstance(phi, Exists):
            a = self.labels(phi.arg)
            lab = []
            for s in f.base:
                lab.append(disj(a[f.index[t]] for t in x_variants(f, s, phi.var, self.qd)))
        elif isinstance(phi, E):
            lab = self._exists_path(phi.path)
        else:
            raise NotAStateFormula(f"{type(phi).__name__} is a path operator outside E")
        self._labels[phi] = lab
        return lab

    def _exists_path(self, psi: Formula) -> list[Verdict]:
        f = self.f
        root = _nnf(psi)
        lits = [x for x in _nnf_nodes(root) if isinstance(x, _Lit)]
        definite = {x: [v.is_true for v in self.labels(x.state_formula)] for x in lits}
        possible = {x: [not v.is_false for v in self.labels(x.state_formula)] for x in lits}
        lower = _Product(root, self.succ, definite)
        upper = _Product(root, self.succ, possible)
        complete = self.bound >= completeness_threshold(f.n, psi)
        out = []
        for k in range(f.n):
            if lower.holds_at(k):
                w = lower.witness(k)
                lasso = LassoPath(tuple(f.base[j] for j in w.prefix), tuple(f.base[j] for j in w.cycle))
                fits = len(lasso.prefix) <= self.bound and len(lasso.cycle) <= self.bound
                if complete or fits:
                    out.append(TRUE.with_witness(lasso))
                else:
                    out.append(unknown(BUDGET_EXHAUSTED))
            elif not upper.holds_at(k):
                out.append(FALSE if complete else unknown(BUDGET_EXHAUSTED))
            else:
                out.append(unknown(BUDGET_EXHAUSTED))
        return out


def foctlstar_check(
    i: InterpretationTheory,
    f: FiniteFrame,
    point: str | LassoPath,
    phi: Formula,
    qd: QuantDomain | None = None,
    bound: int | None = None,
    b: EntailBudget = EntailBudget(),
    rel: str = "T",
) -> Verdict:
    """Evaluate a state formula at a state, or a path formula along a lasso.

    ``bound`` defaults to the completeness threshold of the formula, in which
    case no E-subformula can come back Unknown for lack of search depth.
    """
    require_logic(phi, FOCTLSTAR_NODES, "FOCTL*")
    check_sorts(phi)
    require_conditions(f, [Condition.macro("total", rel)])
    if bound is None:
        bound = max(
            [completeness_threshold(f.n, s.path) for s in subformulas(phi) if isinstance(s, E)] + [1]
        )
    if bound < 1:
        raise ValueError("bound must be at least 1")
    model = FoctlModel(i, f, qd, b, bound, rel)
    if isinstance(point, LassoPath):
        point.validate(f, rel)
        return lasso_labels(point, phi, lambda node, s: model.labels(node)[f.index[s]])[phi][0]
    if point not in f.index:
        raise InvalidFrame(f"state {point!r} is not in the frame")
    if not is_state_formula(phi):
        raise NotAStateFormula("a path formula needs a path; wrap it in E or pass a lasso")
    return model.labels(phi)[f.index[point]]
