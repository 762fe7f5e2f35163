import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import prop_frame, random_labels, random_relation
from oracles import closure_by_powers, pairs_compose, pairs_converse
from relkit.errors import InvalidFrame, UnboundPointVariable, UnknownRelationSymbol, UnmappedSymbol
from relkit.relalg import (
    IDENT,
    ONE,
    ZERO,
    Condition,
    FExists,
    FEq,
    FForall,
    FiniteFrame,
    FrameMap,
    FRel,
    RComp,
    RCompl,
    RConv,
    Relation,
    RInter,
    RStar,
    RSym,
    RUnion,
    axioms_selftest,
    check_bounded_morphism,
    closure,
    eval_formula,
    eval_relterm,
    verify_frame_conditions,
)


def frame(n, **rels):
    return FiniteFrame([str(k + 1) for k in range(n)], rels)


def as_pairs(f, r):
    return {(f.base[i], f.base[j]) for i, j in r.pairs()}


def test_eval_relterm_examples():
    f = frame(2, R=[("1", "2")])
    assert len(eval_relterm(f, ZERO)) == 0
    assert eval_relterm(f, ONE) == Relation.full(2)
    assert as_pairs(f, eval_relterm(f, RComp(RSym("R"), RConv(RSym("R"))))) == {("1", "1")}
    g = frame(3, R=[("1", "2"), ("2", "3")])
    want = {("1", "1"), ("2", "2"), ("3", "3"), ("1", "2"), ("2", "3"), ("1", "3")}
    assert as_pairs(g, eval_relterm(g, RStar(RSym("R")))) == want
    with pytest.raises(UnknownRelationSymbol):
        eval_relterm(f, RSym("S"))


def test_closure_examples():
    assert closure(Relation.empty(3)) == Relation.identity(3)
    assert closure(Relation.identity(3)) == Relation.identity(3)
    assert closure(Relation.from_pairs(2, [(0, 1), (1, 0)])) == Relation.full(2)


def test_frame_invariants():
    with pytest.raises(InvalidFrame):
        FiniteFrame([])
    with pytest.raises(InvalidFrame):
        FiniteFrame(["a"], {"R": [("a", "b")]})
    with pytest.raises(ValueError):
        Relation(2, (0b100, 0))


# random terms checked clause by clause against pair-set arithmetic


def random_term(rng, syms, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([RSym(s) for s in syms] + [ZERO, ONE, IDENT])
    k = rng.randrange(7)
    sub = lambda: random_term(rng, syms, depth - 1)  # noqa: E731
    return [
        lambda: RUnion(sub(), sub()),
        lambda: RInter(sub(), sub()),
        lambda: RComp(sub(), sub()),
        lambda: RCompl(sub()),
        lambda: RConv(sub()),
        lambda: RStar(sub()),
        lambda: RComp(sub(), sub()),
    ][k]()


def pair_eval(rels, n, t):
    full = {(i, j) for i in range(n) for j in range(n)}
    if isinstance(t, RSym):
        return rels[t.name]
    if t is ZERO:
        return set()
    if t is ONE:
        return full
    if t is IDENT:
        return {(i, i) for i in range(n)}
    if isinstance(t, RUnion):
        return pair_eval(rels, n, t.left) | pair_eval(rels, n, t.right)
    if isinstance(t, RInter):
        return pair_eval(rels, n, t.left) & pair_eval(rels, n, t.right)
    if isinstance(t, RComp):
        return pairs_compose(pair_eval(rels, n, t.left), pair_eval(rels, n, t.right))
    if isinstance(t, RCompl):
        return full - pair_eval(rels, n, t.arg)
    if isinstance(t, RConv):
        return pairs_converse(pair_eval(rels, n, t.arg))
    assert isinstance(t, RStar)
    return closure_by_powers(pair_eval(rels, n, t.arg), n)


def test_eval_relterm_matches_pair_oracle():
    rng = random.Random(17)
    for _ in range(400):
        n = rng.randint(1, 6)
        rels = {s: random_relation(rng, n) for s in ("R", "S")}
        f = FiniteFrame([f"s{k}" for k in range(n)], rels)
        t = random_term(rng, ["R", "S"], 4)
        got = set(eval_relterm(f, t).pairs())
        assert got == pair_eval({k: set(v.pairs()) for k, v in rels.items()}, n, t)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=30))
def test_closure_is_least_reflexive_transitive_superset(n, pairs):
    pairs = {(i, j) for i, j in pairs if i < n and j < n}
    c = Relation.from_pairs(n, pairs).closure()
    assert set(c.pairs()) == closure_by_powers(pairs, n)
    assert c.compose(c) == c and Relation.identity(n).issubset(c)


def test_eval_formula_examples():
    f = frame(2, R=[])
    assert eval_formula(f, {}, FForall(("x",), FRel("x", IDENT, "x")))
    assert not eval_formula(f, {}, FExists(("x", "y"), FRel("x", RSym("R"), "y")))
    with pytest.raises(UnboundPointVariable):
        eval_formula(f, {}, FRel("x", ONE, "y"))
    assert eval_formula(f, {"x": "1", "y": "2"}, FRel("x", ONE, "y"))


def test_distributivity_on_random_frames():
    rng = random.Random(4)
    R, S, T = RSym("R"), RSym("S"), RSym("T")
    law = FEq(RComp(R, RUnion(S, T)), RUnion(RComp(R, S), RComp(R, T)))
    for _ in range(50):
        n = rng.randint(1, 5)
        f = FiniteFrame([f"s{k}" for k in range(n)], {k: random_relation(rng, n) for k in "RST"})
        assert eval_formula(f, {}, law)


def test_axioms_selftest_on_random_frames():
    rng = random.Random(8)
    for _ in range(60):
        n = rng.randint(1, 5)
        rels = {f"R{k}": random_relation(rng, n) for k in range(rng.randint(0, 3))}
        report = axioms_selftest(FiniteFrame([f"s{k}" for k in range(n)], rels))
        assert report.passed, report.failures()
    empty = axioms_selftest(frame(3, R=[]))
    assert empty.passed and any(r.label == "Ax.9[R]" for r in empty)


# frame-condition macros


def test_macros_on_hand_frames():
    good = frame(2, T=[("1", "2"), ("2", "1")])
    rep = verify_frame_conditions(good, [Condition.macro("total", "T"), Condition.macro("functional", "T")])
    assert rep.passed
    bad = frame(2, T=[("1", "2")])
    rep = verify_frame_conditions(bad, [Condition.macro("total", "T")])
    (fail,) = rep.failures()
    assert fail.label == "total T" and fail.witness["x"] == "2"
    init = frame(2, St0=[("1", "1")])
    assert verify_frame_conditions(init, [Condition.macro("initial", "St0")]).passed


def test_macros_match_direct_definitions():
    rng = random.Random(12)
    for _ in range(200):
        n = rng.randint(1, 5)
        t = random_relation(rng, n, density=rng.choice([0.15, 0.3, 0.6]))
        f = FiniteFrame([f"s{k}" for k in range(n)], {"T": t})
        succ = [t.successors(i) for i in range(n)]
        expect = {
            "total": all(succ),
            "functional": all(len(s) <= 1 for s in succ),
            "initial": all(set(s) <= {i} for i, s in enumerate(succ)),
            # T;T~ meets the identity exactly where T has a successor
            "total_program": all(succ),
        }
        for name, want in expect.items():
            assert verify_frame_conditions(f, [Condition.macro(name, "T")]).passed == want, name


# bounded morphisms


def test_identity_is_bounded_morphism():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randint(1, 4)
        f = prop_frame({"T": random_relation(rng, n)}, random_labels(rng, n))
        assert check_bounded_morphism(f, f, FrameMap.identity(f)).is_true


def test_collapse_of_equivalent_states():
    lab = [frozenset({"p"}), frozenset(), frozenset()]
    src = prop_frame({"T": Relation.from_pairs(3, [(0, 1), (0, 2), (1, 0), (2, 0)])}, lab)
    dst = prop_frame({"T": Relation.from_pairs(2, [(0, 1), (1, 0)])}, lab[:2])
    fm = FrameMap({"T": "T"}, {"s0": "s0", "s1": "s1", "s2": "s1"})
    assert check_bounded_morphism(src, dst, fm).is_true


def test_backward_and_forward_violations():
    lab = [frozenset(), frozenset()]
    src = prop_frame({"T": Relation.from_pairs(2, [])}, lab)
    dst = prop_frame({"T": Relation.from_pairs(2, [(0, 1)])}, lab)
    v = check_bounded_morphism(src, dst, FrameMap.identity(src))
    assert v.is_false and v.witness["condition"] == "backward" and v.witness["edge"] == ["s0", "s1"]
    v = check_bounded_morphism(dst, src, FrameMap.identity(dst))
    assert v.is_false and v.witness["condition"] == "forward"


def test_state_theory_mismatch_and_unmapped():
    a = prop_frame({"T": Relation.from_pairs(1, [(0, 0)])}, [frozenset({"p"})])
    b = prop_frame({"T": Relation.from_pairs(1, [(0, 0)])}, [frozenset()])
    v = check_bounded_morphism(a, b, FrameMap.identity(a))
    assert v.is_false and v.witness["condition"] == "state"
    with pytest.raises(UnmappedSymbol):
        check_bounded_morphism(a, b, FrameMap({}, {"s0": "s0"}))
