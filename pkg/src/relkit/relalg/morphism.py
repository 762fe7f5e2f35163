from __future__ import annotations

from relkit.entail import EntailBudget
from relkit.errors import IllFormedGoal, SignatureMismatch, UnmappedSymbol
from relkit.relalg.frame import FiniteFrame, FrameMap
from relkit.theoria import InterpretationTheory, StateTheory, mk_interpretation, sat_state
from relkit.verdict import FALSE, TRUE, Verdict, conj, unknown


def _derives_all(i: InterpretationTheory, have: StateTheory, want: StateTheory, b: EntailBudget) -> Verdict:
    verdicts = []
    for s in want.sentences():
        try:
            verdicts.append(sat_state(i, have, s, b))
        except (IllFormedGoal, SignatureMismatch):
            return FALSE
    return conj(verdicts)


def check_bounded_morphism(
    src: FiniteFrame,
    dst: FiniteFrame,
    fm: FrameMap,
    b: EntailBudget = EntailBudget(),
    interp: InterpretationTheory | None = None,
) -> Verdict:
    """Forward and backward conditions for every named relation, then
    equi-derivability of each state theory with that of its image."""
    for r in src.rels:
        if r not in fm.rel_map:
            raise UnmappedSymbol(f"relation {r!r} has no image")
        if fm.rel_map[r] not in dst.rels:
            raise UnmappedSymbol(f"image {fm.rel_map[r]!r} of {r!r} is not a relation of the target")
    for s in src.base:
        if s not in fm.h:
            raise UnmappedSymbol(f"state {s!r} has no image")
        if fm.h[s] not in dst.index:
            raise UnmappedSymbol(f"image {fm.h[s]!r} of state {s!r} is not in the target frame")
    h = fm.h
    for r, r2 in fm.rel_map.items():
        if r not in src.rels:
            continue
        for s1, s2 in src.pairs(r):
            if (dst.index[h[s1]], dst.index[h[s2]]) not in dst.rel(r2):
                return FALSE.with_witness(
                    {"condition": "forward", "relation": r, "edge": [s1, s2], "image": [h[s1], h[s2]]}
                )
        for s1 in src.base:
            reached = {h[s2] for s2 in src.successors(r, s1)}
            for t2 in dst.successors(r2, h[s1]):
                if t2 not in reached:
                    return FALSE.with_witness(
                        {"condition": "backward", "relation": r, "state": s1, "edge": [h[s1], t2]}
                    )
    if interp is None:
        interp = mk_interpretation(src.rigid_sig)
    pending = None
    for s in src.base:
        a, t = src.state(s), dst.state(h[s])
        v = conj([_derives_all(interp, a, t, b), _derives_all(interp, t, a, b)])
        if v.is_false:
            return FALSE.with_witness({"condition": "state", "state": s, "image": h[s]})
        if v.is_unknown and pending is None:
            pending = unknown(v.reason, {"condition": "state", "state": s, "image": h[s]})
    return pending if pending is not None else TRUE
