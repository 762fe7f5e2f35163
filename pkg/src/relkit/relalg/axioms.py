"""Semantic self-test of the relational calculus axioms on a concrete frame.

Every axiom is instantiated with the frame's relation symbols (ordered pairs
for the binary ones) and evaluated by the ordinary formula evaluator, so a
failure points at a disagreement between the term evaluator and the
first-order connectives.
"""

from __future__ import annotations

import itertools

from relkit.relalg.frame import Condition, FiniteFrame, FrameReport, verify_frame_conditions
from relkit.relalg.terms import (
    IDENT,
    ONE,
    ZERO,
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
    RelTerm,
    RInter,
    RStar,
    RSym,
    RUnion,
)


def power(r: RelTerm, i: int) -> RelTerm:
    """``r ;...; r`` (``i`` factors), with the zeroth power being ``1'``."""
    out: RelTerm = IDENT
    for _ in range(i):
        out = r if out is IDENT else RComp(out, r)
    return out


def _xy(r: RelTerm) -> FRel:
    return FRel("x", r, "y")


def calculus_axioms(symbols: list[str], base_size: int) -> list[Condition]:
    out = [
        Condition("Ax.1", FForall(("x", "y"), FNot(_xy(ZERO)))),
        Condition("Ax.3", FForall(("x", "y"), _xy(ONE))),
        Condition("Ax.6", FForall(("x",), FRel("x", IDENT, "x"))),
    ]
    for name in symbols:
        r = RSym(name)
        out.append(Condition(f"Ax.5[{name}]", FForall(("x", "y"), FIff(_xy(RCompl(r)), FNot(_xy(r))))))
        out.append(
            Condition(
                f"Ax.6'[{name}]",
                FForall(
                    ("x", "y", "z"),
                    FImp(FAnd((_xy(r), FRel("y", IDENT, "z"))), FRel("x", r, "z")),
                ),
            )
        )
        out.append(Condition(f"Ax.8[{name}]", FForall(("x", "y"), FIff(_xy(RConv(r)), FRel("y", r, "x")))))
        powers = FOr(tuple(_xy(power(r, i)) for i in range(base_size + 1)))
        out.append(Condition(f"Ax.9[{name}]", FForall(("x", "y"), FIff(_xy(RStar(r)), powers))))
    for a, b in itertools.product(symbols, repeat=2):
        r, s = RSym(a), RSym(b)
        tag = f"[{a},{b}]"
        out.append(
            Condition(f"Ax.2{tag}", FForall(("x", "y"), FIff(_xy(RUnion(r, s)), FOr((_xy(r), _xy(s))))))
        )
        out.append(
            Condition(f"Ax.4{tag}", FForall(("x", "y"), FIff(_xy(RInter(r, s)), FAnd((_xy(r), _xy(s))))))
        )
        out.append(
            Condition(
                f"Ax.7{tag}",
                FForall(
                    ("x", "y"),
                    FIff(
                        _xy(RComp(r, s)),
                        FExists(("z",), FAnd((FRel("x", r, "z"), FRel("z", s, "y")))),
                    ),
                ),
            )
        )
        out.append(
            Condition(
                f"Ax.10{tag}",
                FIff(FEq(r, s), FForall(("x", "y"), FIff(_xy(r), _xy(s)))),
            )
        )
    return out


def axioms_selftest(f: FiniteFrame) -> FrameReport:
    return verify_frame_conditions(f, calculus_axioms(list(f.rels), f.n))

