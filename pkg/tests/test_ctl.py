import random

import pytest

from gen import EMPTY_INTERP, P, Q, expanded_frame, prop_frame, random_ctl, random_total_frame
from oracles import ctl_by_paths, lfp_states, prop_name, reachable
from relkit.errors import FrameConditionViolated, UnsupportedOperator
from relkit.logics import AF, AG, AU, AX, EF, EG, EU, EX, Next, ctl_check, ctl_labels, ctl_witness
from relkit.logics import formulas as lf
from relkit.relalg import FrameMap, Relation, check_bounded_morphism


def succ_of(f):
    return [f.rel("T").successors(k) for k in range(f.n)]


def labels_of(f):
    return [frozenset(d.symbol for d in f.state(s).defs) for s in f.base]


def test_examples():
    cyc = prop_frame(
        {"T": Relation.from_pairs(3, [(0, 1), (1, 2), (2, 1)])},
        [frozenset(), frozenset({"p"}), frozenset({"p"})],
    )
    assert all(ctl_check(EMPTY_INTERP, cyc, s, EG(lf.TRUE)).is_true for s in cyc.base)
    assert ctl_check(EMPTY_INTERP, cyc, "s0", EU(lf.TRUE, P)).is_true
    f = prop_frame({"T": Relation.from_pairs(2, [(0, 1), (1, 1)])}, [frozenset({"p"}), frozenset()])
    assert ctl_check(EMPTY_INTERP, f, "s0", EX(P)).is_false


def test_preconditions():
    dead = prop_frame({"T": Relation.from_pairs(2, [(0, 1)])}, [frozenset()] * 2)
    with pytest.raises(FrameConditionViolated):
        ctl_check(EMPTY_INTERP, dead, "s0", EX(P))
    ok = prop_frame({"T": Relation.from_pairs(1, [(0, 0)])}, [frozenset()])
    with pytest.raises(UnsupportedOperator):
        ctl_check(EMPTY_INTERP, ok, "s0", Next(P))


def test_fixpoints_match_path_semantics():
    rng = random.Random(21)
    for _ in range(100):
        f = random_total_frame(rng, rng.randint(1, 5))
        succ, labels = succ_of(f), labels_of(f)
        phi = random_ctl(rng, 3)
        lab = ctl_labels(EMPTY_INTERP, f, phi)[phi]
        for k in range(f.n):
            assert lab[k].is_true == ctl_by_paths(succ, labels, phi, k)


def _sat(f, phi):
    return {k for k, v in enumerate(ctl_labels(EMPTY_INTERP, f, phi)[phi]) if v.is_true}


def test_derived_operators_match_characterisations():
    rng = random.Random(34)
    for _ in range(120):
        f = random_total_frame(rng, rng.randint(1, 5))
        succ, n = succ_of(f), f.n
        a, b = random_ctl(rng, 1), random_ctl(rng, 1)
        sa, sb = _sat(f, a), _sat(f, b)
        assert _sat(f, EF(a)) == {k for k in range(n) if reachable(succ, k) & sa}
        assert _sat(f, AG(a)) == {k for k in range(n) if reachable(succ, k) <= sa}
        assert _sat(f, AX(a)) == {k for k in range(n) if set(succ[k]) <= sa}
        assert _sat(f, AF(a)) == lfp_states(n, lambda k, z: k in sa or set(succ[k]) <= z)
        assert _sat(f, AU(a, b)) == lfp_states(
            n, lambda k, z: k in sb or (k in sa and set(succ[k]) <= z)
        )


def _follows(f, pi):
    pi.validate(f)
    return [f.index[s] for s in pi.positions], len(pi.prefix)


def test_witness_paths_are_valid_and_explain_the_verdict():
    rng = random.Random(8)
    seen = 0
    for _ in range(150):
        f = random_total_frame(rng, rng.randint(1, 5))
        a, b = random_ctl(rng, 1), random_ctl(rng, 1)
        for phi in (EX(a), EU(a, b), EG(a)):
            labels = ctl_labels(EMPTY_INTERP, f, phi)
            for s in f.base:
                pi = ctl_witness(f, labels, s, phi)
                if not labels[phi][f.index[s]].is_true:
                    assert pi is None
                    continue
                seen += 1
                seq, p = _follows(f, pi)
                assert seq[0] == f.index[s]
                if isinstance(phi, EX):
                    nxt = seq[1] if len(seq) > 1 else seq[p]
                    assert labels[a][nxt].is_true
                elif isinstance(phi, EG):
                    assert all(labels[a][k].is_true for k in seq)
                else:
                    j = next(j for j, k in enumerate(seq) if labels[b][k].is_true)
                    assert all(labels[a][k].is_true for k in seq[:j])
    assert seen > 100


def test_bounded_morphism_preserves_ctl():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(1, 4)
        dst = random_total_frame(rng, n)
        src, h = expanded_frame(rng, dst)
        assert check_bounded_morphism(src, dst, FrameMap({"T": "T"}, h)).is_true
        for _ in range(5):
            phi = random_ctl(rng, 3)
            ls, ld = ctl_labels(EMPTY_INTERP, src, phi)[phi], ctl_labels(EMPTY_INTERP, dst, phi)[phi]
            for s in src.base:
                assert ls[src.index[s]].truth is ld[dst.index[h[s]]].truth


def test_prop_name_reads_tagged_atoms():
    assert prop_name(P) == "p" and prop_name(Q) == "q"
