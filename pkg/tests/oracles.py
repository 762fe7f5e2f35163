"""Brute-force reference semantics, written independently of relkit's algorithms.

Everything here works on plain Python sets and explicit enumeration; it only
imports relkit's data classes (terms, formula nodes) to read its inputs.
"""

from __future__ import annotations

import itertools
from typing import Callable

from relkit.eqcore import Equation, PredApp
from relkit.logics import formulas as lf

# relations as sets of pairs


def pairs_compose(a: set, b: set) -> set:
    return {(x, z) for x, y in a for y2, z in b if y == y2}


def pairs_converse(a: set) -> set:
    return {(y, x) for x, y in a}


def closure_by_powers(a: set, n: int) -> set:
    """Union of r^0 .. r^n by naive repeated composition."""
    power = {(i, i) for i in range(n)}
    out = set(power)
    for _ in range(n):
        power = pairs_compose(power, a)
        out |= power
    return out


# ground deductive closure


def _subterms(t):
    yield t
    for a in t.args:
        yield from _subterms(a)


def deductive_closure(sentences, extra_terms=()):
    """Equalities and facts derivable by reflexivity, symmetry, transitivity,
    congruence and predicate substitution, iterated to a fixpoint over the
    subterms of the inputs."""
    universe = set()
    for s in sentences:
        for t in s.terms():
            universe.update(_subterms(t))
    for t in extra_terms:
        universe.update(_subterms(t))
    eq = {(t, t) for t in universe}
    facts = set()
    for s in sentences:
        if isinstance(s, Equation):
            eq.add((s.lhs, s.rhs))
        else:
            facts.add((s.pred, s.args))
    terms = list(universe)
    changed = True
    while changed:
        changed = False
        new = set()
        for x, y in eq:
            new.add((y, x))
        for (x, y), (y2, z) in itertools.product(eq, eq):
            if y == y2:
                new.add((x, z))
        for s, t in itertools.product(terms, terms):
            if s.head == t.head and len(s.args) == len(t.args) and s.args:
                if all((a, b) in eq for a, b in zip(s.args, t.args)):
                    new.add((s, t))
        new_facts = set()
        for pred, args in facts:
            for cand in itertools.product(*[[t for t in terms if (a, t) in eq] for a in args]):
                new_facts.add((pred, tuple(cand)))
        if not new <= eq or not new_facts <= facts:
            eq |= new
            facts |= new_facts
            changed = True
    return eq, facts


def derivable(sentences, goal) -> bool:
    eq, facts = deductive_closure(sentences, goal.terms())
    if isinstance(goal, Equation):
        return (goal.lhs, goal.rhs) in eq
    return (goal.pred, goal.args) in facts


def partition_derivable(sentences, goal) -> bool:
    """Same rules as :func:`deductive_closure`, but equalities are kept as a
    partition (which is already reflexive, symmetric and transitive); the
    congruence rule is applied by scanning every pair of applications until
    nothing changes. Suitable for a few hundred terms."""
    universe = set()
    for s in list(sentences) + [goal]:
        for t in s.terms():
            universe.update(_subterms(t))
    block = {t: i for i, t in enumerate(universe)}

    def join(x, y):
        bx, by = block[x], block[y]
        if bx != by:
            for t, k in block.items():
                if k == by:
                    block[t] = bx
            return True
        return False

    for s in sentences:
        if isinstance(s, Equation):
            join(s.lhs, s.rhs)
    apps = [t for t in universe if t.args]
    changed = True
    while changed:
        changed = False
        for s, t in itertools.combinations(apps, 2):
            if s.head == t.head and len(s.args) == len(t.args) and block[s] != block[t]:
                if all(block[a] == block[b] for a, b in zip(s.args, t.args)):
                    changed |= join(s, t)
    if isinstance(goal, Equation):
        return block[goal.lhs] == block[goal.rhs]
    facts = {(s.pred, tuple(block[a] for a in s.args)) for s in sentences if isinstance(s, PredApp)}
    return (goal.pred, tuple(block[a] for a in goal.args)) in facts


# temporal semantics on explicit words


def prop_name(atom) -> str:
    """Proposition name of a zero-ary atom, with or without a side tag."""
    pred = atom.sentence.pred
    return getattr(pred, "name", pred)


def unroll(prefix_len: int, cycle_len: int, depth: int) -> list[int]:
    """Lasso positions of the explicit unrolling of length p + c*(depth+2)."""
    length = prefix_len + cycle_len * (depth + 2)
    return [k if k < prefix_len else prefix_len + (k - prefix_len) % cycle_len for k in range(length)]


def eval_word(
    phi,
    word: list,
    i: int,
    prefix_len: int,
    cycle_len: int,
    leaf: Callable[[object, object], bool],
) -> bool:
    """Naive LTL evaluation at index ``i`` of an explicit unrolled word.

    Until searches j in [i, max(i, p) + c): past that point the suffixes
    repeat, so the window is exhaustive. Indices must stay inside ``word``.
    """

    def ev(f, k):
        if k >= len(word):
            raise IndexError("unrolling too short for this formula")
        if isinstance(f, lf.Top):
            return True
        if isinstance(f, lf.Not):
            return not ev(f.arg, k)
        if isinstance(f, lf.Or):
            return ev(f.left, k) or ev(f.right, k)
        if isinstance(f, lf.And):
            return ev(f.left, k) and ev(f.right, k)
        if isinstance(f, lf.Next):
            return ev(f.arg, k + 1)
        if isinstance(f, lf.Until):
            for j in range(k, max(k, prefix_len) + cycle_len):
                if ev(f.right, j):
                    return True
                if not ev(f.left, j):
                    return False
            return False
        return leaf(f, word[k])

    return ev(phi, i)


# direct quantifier readings of the derived LTL operators on a lasso


def _window(i, p, c):
    return range(i, max(i, p) + c)


def derived_direct(op, a, b, p, c):
    """Truth at position 0, given per-position truth lists ``a``/``b`` for the operands."""
    win = list(_window(0, p, c))
    if op == "F":
        return any(a[j] for j in win)
    if op == "G":
        return all(a[j] for j in win)
    if op == "R":
        return all(b[j] or any(a[k] for k in range(j)) for j in win)
    if op == "W":
        until = any(b[j] and all(a[k] for k in range(j)) for j in win)
        return until or all(a[j] for j in win)
    assert op == "M"
    return any(a[j] and b[j] and all(b[k] for k in range(j)) for j in win)


def temporal_nesting(phi) -> int:
    if isinstance(phi, (lf.Next,)):
        return 1 + temporal_nesting(phi.arg)
    if isinstance(phi, lf.Until):
        return 1 + max(temporal_nesting(phi.left), temporal_nesting(phi.right))
    if isinstance(phi, lf.Not):
        return temporal_nesting(phi.arg)
    if isinstance(phi, (lf.Or, lf.And)):
        return max(temporal_nesting(phi.left), temporal_nesting(phi.right))
    return 0


def prop_leaf(labels):
    """Leaf evaluator for p/q atoms over per-position label sets."""

    def leaf(f, pos):
        assert isinstance(f, lf.Atom) and isinstance(f.sentence, PredApp)
        return prop_name(f) in labels[pos]

    return leaf


# CTL by path enumeration


def simple_paths(succ: list[list[int]], s: int):
    """Every simple path starting at ``s`` (as tuples)."""
    stack = [(s,)]
    while stack:
        path = stack.pop()
        yield path
        for t in succ[path[-1]]:
            if t not in path:
                stack.append(path + (t,))


def ctl_by_paths(succ: list[list[int]], labels, phi, s: int) -> bool:
    """Path semantics: EU over simple paths, EG over simple lassos."""
    memo: dict = {}

    def ev(f, k):
        key = (f, k)
        if key in memo:
            return memo[key]
        if isinstance(f, lf.Top):
            v = True
        elif isinstance(f, lf.Atom):
            v = prop_name(f) in labels[k]
        elif isinstance(f, lf.Not):
            v = not ev(f.arg, k)
        elif isinstance(f, lf.Or):
            v = ev(f.left, k) or ev(f.right, k)
        elif isinstance(f, lf.And):
            v = ev(f.left, k) and ev(f.right, k)
        elif isinstance(f, lf.EX):
            v = any(ev(f.arg, t) for t in succ[k])
        elif isinstance(f, lf.EU):
            v = any(
                ev(f.right, path[-1]) and all(ev(f.left, x) for x in path[:-1])
                for path in simple_paths(succ, k)
            )
        elif isinstance(f, lf.EG):
            v = any(
                all(ev(f.arg, x) for x in path) and any(t in path for t in succ[path[-1]])
                for path in simple_paths(succ, k)
            )
        else:
            raise TypeError(f)
        memo[key] = v
        return v

    return ev(phi, s)


def reachable(succ, s) -> set:
    seen, todo = {s}, [s]
    while todo:
        u = todo.pop()
        for t in succ[u]:
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def lfp_states(n, step) -> set:
    z: set = set()
    while True:
        nz = {k for k in range(n) if step(k, z)}
        if nz == z:
            return z
        z = nz


# dynamic logic over explicit relations


def pdl_eval(rels: dict[str, set], labels, n: int, phi) -> set:
    """States satisfying ``phi``; programs denote sets of pairs."""

    def prog(p) -> set:
        if isinstance(p, lf.PAtom):
            return set(rels[p.name])
        if isinstance(p, lf.PTest):
            sat = form(p.cond)
            return {(k, k) for k in sat}
        if isinstance(p, lf.PUnion):
            return prog(p.left) | prog(p.right)
        if isinstance(p, lf.PSeq):
            return pairs_compose(prog(p.left), prog(p.right))
        assert isinstance(p, lf.PStar)
        return closure_by_powers(prog(p.arg), n)

    def form(f) -> set:
        if isinstance(f, lf.Top):
            return set(range(n))
        if isinstance(f, lf.Atom):
            return {k for k in range(n) if prop_name(f) in labels[k]}
        if isinstance(f, lf.Not):
            return set(range(n)) - form(f.arg)
        if isinstance(f, lf.Or):
            return form(f.left) | form(f.right)
        if isinstance(f, lf.And):
            return form(f.left) & form(f.right)
        assert isinstance(f, lf.Diamond)
        target = form(f.arg)
        return {a for a, b in prog(f.program) if b in target}

    return form(phi)


# CTL* existential path quantifier by lasso enumeration


def lassos_from(succ: list[list[int]], s: int, max_len: int):
    """All lassos (positions, loop index) starting at ``s`` with length <= max_len."""
    stack = [(s,)]
    while stack:
        path = stack.pop()
        last = path[-1]
        for p in range(len(path)):
            if path[p] in succ[last]:
                yield path, p
        if len(path) < max_len:
            for t in succ[last]:
                stack.append(path + (t,))


def ctlstar_exists(succ, labels, psi, s: int, max_len: int, state_eval=None) -> bool:
    """E psi at ``s``: some lasso of length <= max_len satisfies ``psi``."""
    d = temporal_nesting(psi)

    def leaf(f, state):
        if isinstance(f, lf.Atom):
            return prop_name(f) in labels[state]
        return state_eval(f, state)

    for path, p in lassos_from(succ, s, max_len):
        c = len(path) - p
        word = [path[k] for k in unroll(p, c, d)]
        if eval_word(psi, word, 0, p, c, leaf):
            return True
    return False
