"""Abstract syntax shared by the LTL, CTL, FODL and FOCTL* checkers.

Only primitive connectives are represented; the derived temporal operators are
functions that build their expansions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from relkit.eqcore import Sentence, format_pred


@dataclass(frozen=True)
class Atom:
    sentence: Sentence


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Next:
    arg: "Formula"


@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Release:
    """Only produced by negation normal form; never by the parser."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class EX:
    arg: "Formula"


@dataclass(frozen=True)
class EG:
    arg: "Formula"


@dataclass(frozen=True)
class EU:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    program: "Program"
    arg: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    arg: "Formula"


@dataclass(frozen=True)
class E:
    """Path quantifier of FOCTL*: some path from here satisfies ``path``."""

    path: "Formula"


Formula = Union[Atom, Top, Not, Or, And, Next, Until, Release, EX, EG, EU, Diamond, Exists, E]


@dataclass(frozen=True)
class PAtom:
    name: str


@dataclass(frozen=True)
class PTest:
    cond: Formula


@dataclass(frozen=True)
class PUnion:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class PSeq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class PStar:
    arg: "Program"


Program = Union[PAtom, PTest, PUnion, PSeq, PStar]

TRUE = Top()
FALSE = Not(TRUE)


def implies(a: Formula, b: Formula) -> Formula:
    return Or(Not(a), b)


# LTL


def F(phi: Formula) -> Formula:
    return Until(TRUE, phi)


def G(phi: Formula) -> Formula:
    return Not(F(Not(phi)))


def R(phi: Formula, psi: Formula) -> Formula:
    return Not(Until(Not(phi), Not(psi)))


def W(phi: Formula, psi: Formula) -> Formula:
    return Or(Until(phi, psi), G(phi))


def M(phi: Formula, psi: Formula) -> Formula:
    return And(R(phi, psi), F(phi))


# CTL


def EF(phi: Formula) -> Formula:
    return EU(TRUE, phi)


def AX(phi: Formula) -> Formula:
    return Not(EX(Not(phi)))


def AU(phi: Formula, psi: Formula) -> Formula:
    return Not(Or(EU(Not(psi), Not(Or(phi, psi))), EG(Not(psi))))


def AF(phi: Formula) -> Formula:
    return Not(EG(Not(phi)))


def AG(phi: Formula) -> Formula:
    return Not(EF(Not(phi)))


# dynamic logic


def box(p: Program, phi: Formula) -> Formula:
    return Not(Diamond(p, Not(phi)))


def if_then_else(cond: Formula, p: Program, q: Program) -> Program:
    return PUnion(PSeq(PTest(cond), p), PSeq(PTest(Not(cond)), q))


def while_do(cond: Formula, p: Program) -> Program:
    return PSeq(PStar(PSeq(PTest(cond), p)), PTest(Not(cond)))


_UNARY = (Not, Next, EX, EG, E)
_BINARY = (Or, And, Until, Release, EU)


def children(phi: Formula) -> tuple:
    if isinstance(phi, (Atom, Top)):
        return ()
    if isinstance(phi, Exists):
        return (phi.arg,)
    if isinstance(phi, Diamond):
        return (phi.arg,)
    if isinstance(phi, E):
        return (phi.path,)
    if isinstance(phi, _UNARY):
        return (phi.arg,)
    return (phi.left, phi.right)


def subformulas(phi: Formula) -> Iterator[Formula]:
    """Post-order, so every subformula precedes the formulas built on it."""
    for c in children(phi):
        yield from subformulas(c)
    yield phi


def program_formulas(p: Program) -> Iterator[Formula]:
    if isinstance(p, PTest):
        yield p.cond
    elif isinstance(p, (PUnion, PSeq)):
        yield from program_formulas(p.left)
        yield from program_formulas(p.right)
    elif isinstance(p, PStar):
        yield from program_formulas(p.arg)


def program_atoms(p: Program) -> Iterator[str]:
    if isinstance(p, PAtom):
        yield p.name
    elif isinstance(p, PTest):
        for sub in subformulas(p.cond):
            if isinstance(sub, Diamond):
                yield from program_atoms(sub.program)
    elif isinstance(p, (PUnion, PSeq)):
        yield from program_atoms(p.left)
        yield from program_atoms(p.right)
    elif isinstance(p, PStar):
        yield from program_atoms(p.arg)


def temporal_depth(phi: Formula) -> int:
    """Nesting depth of the path operators X and U (and R)."""
    inner = max((temporal_depth(c) for c in children(phi)), default=0)
    return inner + (1 if isinstance(phi, (Next, Until, Release)) else 0)


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(c) for c in children(phi)), default=0)
    return inner + (1 if isinstance(phi, (Next, Until, Release, EX, EG, EU, Diamond, E)) else 0)


LTL_NODES = (Atom, Top, Not, Or, And, Next, Until)
CTL_NODES = (Atom, Top, Not, Or, And, EX, EG, EU)
FODL_NODES = (Atom, Top, Not, Or, And, Exists, Diamond)
FOCTLSTAR_NODES = (Atom, Top, Not, Or, And, Exists, E, Next, Until)


def uses_only(phi: Formula, allowed: tuple) -> bool:
    for sub in subformulas(phi):
        if not isinstance(sub, allowed):
            return False
        if isinstance(sub, Diamond):
            if not all(uses_only(c, allowed) for c in program_formulas(sub.program)):
                return False
    return True


def format_formula(phi: Formula, nested: bool = False) -> str:
    if isinstance(phi, Atom):
        return format_pred(phi.sentence) if not hasattr(phi.sentence, "lhs") else str(phi.sentence)
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Not):
        return f"!{format_formula(phi.arg, True)}"
    if isinstance(phi, Next):
        return f"X {format_formula(phi.arg, True)}"
    if isinstance(phi, EX):
        return f"EX {format_formula(phi.arg, True)}"
    if isinstance(phi, EG):
        return f"EG {format_formula(phi.arg, True)}"
    if isinstance(phi, EU):
        return f"E[{format_formula(phi.left, True)} U {format_formula(phi.right, True)}]"
    if isinstance(phi, E):
        return f"E {format_formula(phi.path, True)}"
    if isinstance(phi, Diamond):
        return f"<{format_program(phi.program)}> {format_formula(phi.arg, True)}"
    if isinstance(phi, Exists):
        s = f"exists {phi.var} . {format_formula(phi.arg, True)}"
        return f"({s})" if nested else s
    op = {Or: "|", And: "&", Until: "U", Release: "R"}[type(phi)]
    s = f"{format_formula(phi.left, True)} {op} {format_formula(phi.right, True)}"
    return f"({s})" if nested else s


def format_program(p: Program, nested: bool = False) -> str:
    if isinstance(p, PAtom):
        return p.name
    if isinstance(p, PTest):
        return f"({format_formula(p.cond)})?"
    if isinstance(p, PStar):
        return f"{format_program(p.arg, True)}*"
    op = "+" if isinstance(p, PUnion) else ";"
    s = f"{format_program(p.left, True)} {op} {format_program(p.right, True)}"
    return f"({s})" if nested else s
