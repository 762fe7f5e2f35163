from __future__ import annotations

from collections import deque

from relkit.entail import EntailBudget
from relkit.errors import InvalidFrame
from relkit.logics.common import AtomTable, LassoPath, require_conditions, require_logic
from relkit.logics.formulas import CTL_NODES, EG, EU, EX, And, Atom, Formula, Not, Or, Top, subformulas
from relkit.relalg.frame import Condition, FiniteFrame
from relkit.theoria import InterpretationTheory
from relkit.verdict import FALSE, TRUE, Verdict, conj, disj, neg


def ctl_labels(
    i: InterpretationTheory,
    f: FiniteFrame,
    phi: Formula,
    b: EntailBudget = EntailBudget(),
    rel: str = "T",
) -> dict[Formula, list[Verdict]]:
    """Verdict of every subformula at every state, indexed by ``f.index``.

    EG is computed as a greatest and EU as a least fixpoint; both iterate the
    Kleene connectives, so a value stays Unknown only when neither boolean
    outcome is forced.
    """
    require_logic(phi, CTL_NODES, "CTL")
    require_conditions(f, [Condition.macro("total", rel)])
    atoms = AtomTable(i, f, b)
    r = f.rel(rel)
    succ = [r.successors(k) for k in range(f.n)]
    lab: dict[Formula, list[Verdict]] = {}
    for sub in subformulas(phi):
        if sub in lab:
            continue
        if isinstance(sub, Atom):
            lab[sub] = [atoms.at(s, sub.sentence) for s in f.base]
        elif isinstance(sub, Top):
            lab[sub] = [TRUE] * f.n
        elif isinstance(sub, Not):
            lab[sub] = [neg(v) for v in lab[sub.arg]]
        elif isinstance(sub, (Or, And)):
            op = disj if isinstance(sub, Or) else conj
            a, c = lab[sub.left], lab[sub.right]
            lab[sub] = [op((a[k], c[k])) for k in range(f.n)]
        elif isinstance(sub, EX):
            a = lab[sub.arg]
            lab[sub] = [disj(a[t] for t in succ[k]) for k in range(f.n)]
        elif isinstance(sub, EG):
            a = lab[sub.arg]
            lab[sub] = _iterate(f.n, succ, TRUE, lambda k, z: conj((a[k], disj(z[t] for t in succ[k]))))
        else:
            assert isinstance(sub, EU)
            a, c = lab[sub.left], lab[sub.right]
            lab[sub] = _iterate(
                f.n, succ, FALSE, lambda k, z: disj((c[k], conj((a[k], disj(z[t] for t in succ[k])))))
            )
    return lab


def _iterate(n, succ, start, step) -> list[Verdict]:
    z = [start] * n
    while True:
        nxt = [step(k, z) for k in range(n)]
        if all(x.truth is y.truth for x, y in zip(nxt, z)):
            return nxt
        z = nxt


def ctl_check(
    i: InterpretationTheory,
    f: FiniteFrame,
    s: str,
    phi: Formula,
    b: EntailBudget = EntailBudget(),
    rel: str = "T",
) -> Verdict:
    if s not in f.index:
        raise InvalidFrame(f"state {s!r} is not in the frame")
    return ctl_labels(i, f, phi, b, rel)[phi][f.index[s]]


def _close(f: FiniteFrame, rel: str, path: list[str], keep=None) -> LassoPath:
    """Extend a finite path to a lasso, preferring successors accepted by ``keep``."""
    seen = {s: i for i, s in enumerate(path)}
    while True:
        succ = f.successors(rel, path[-1])
        nxt = next((t for t in succ if keep is None or keep(t)), succ[0])
        if nxt in seen:
            k = seen[nxt]
            return LassoPath(tuple(path[:k]), tuple(path[k:]))
        seen[nxt] = len(path)
        path.append(nxt)


def ctl_witness(
    f: FiniteFrame,
    labels: dict[Formula, list[Verdict]],
    s: str,
    phi: Formula,
    rel: str = "T",
) -> LassoPath | None:
    """A path from ``s`` showing why a true EX, EU or EG formula holds there."""
    if not isinstance(phi, (EX, EU, EG)) or not labels[phi][f.index[s]].is_true:
        return None
    if isinstance(phi, EX):
        a = labels[phi.arg]
        t = next(t for t in f.successors(rel, s) if a[f.index[t]].is_true)
        if t == s:
            return LassoPath((), (s,))
        return _close(f, rel, [s, t])
    if isinstance(phi, EG):
        z = labels[phi]
        return _close(f, rel, [s], lambda t: z[f.index[t]].is_true)
    a, c = labels[phi.left], labels[phi.right]
    prev: dict[str, str | None] = {s: None}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if c[f.index[u]].is_true:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            path.reverse()
            return _close(f, rel, path)
        if not a[f.index[u]].is_true:
            continue
        for t in f.successors(rel, u):
            if t not in prev:
                prev[t] = u
                queue.append(t)
    return None
