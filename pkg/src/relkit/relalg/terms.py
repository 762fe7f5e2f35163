"""Relational terms and first-order relational formulas.

Concrete syntax used by the printer (and the DSL parser)::

    0  1  1'  R + S  R . S  -R  R ; S  R~  R*
    x R y   R = S   !f   f | g   f & g   f -> g   f <=> g
    exists x, y . f   forall x . f   true   false
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class RSym:
    name: str


@dataclass(frozen=True)
class RZero:
    pass


@dataclass(frozen=True)
class ROne:
    pass


@dataclass(frozen=True)
class RIdent:
    pass


@dataclass(frozen=True)
class RUnion:
    left: "RelTerm"
    right: "RelTerm"


@dataclass(frozen=True)
class RInter:
    left: "RelTerm"
    right: "RelTerm"


@dataclass(frozen=True)
class RComp:
    left: "RelTerm"
    right: "RelTerm"


@dataclass(frozen=True)
class RCompl:
    arg: "RelTerm"


@dataclass(frozen=True)
class RConv:
    arg: "RelTerm"


@dataclass(frozen=True)
class RStar:
    arg: "RelTerm"


RelTerm = Union[RSym, RZero, ROne, RIdent, RUnion, RInter, RComp, RCompl, RConv, RStar]

ZERO, ONE, IDENT = RZero(), ROne(), RIdent()

_BINARY = {RUnion: "+", RInter: ".", RComp: ";"}


def relterm_symbols(t: RelTerm) -> Iterator[str]:
    if isinstance(t, RSym):
        yield t.name
    elif isinstance(t, (RUnion, RInter, RComp)):
        yield from relterm_symbols(t.left)
        yield from relterm_symbols(t.right)
    elif isinstance(t, (RCompl, RConv, RStar)):
        yield from relterm_symbols(t.arg)


def format_relterm(t: RelTerm, nested: bool = False) -> str:
    if isinstance(t, RSym):
        return t.name
    if isinstance(t, RZero):
        return "0"
    if isinstance(t, ROne):
        return "1"
    if isinstance(t, RIdent):
        return "1'"
    op = _BINARY.get(type(t))
    if op is not None:
        s = f"{format_relterm(t.left, True)} {op} {format_relterm(t.right, True)}"
        return f"({s})" if nested else s
    inner = format_relterm(t.arg, True)
    if isinstance(t, RCompl):
        return f"-{inner}"
    return inner + ("~" if isinstance(t, RConv) else "*")


@dataclass(frozen=True)
class FRel:
    """``x R y``"""

    x: str
    term: RelTerm
    y: str


@dataclass(frozen=True)
class FEq:
    left: RelTerm
    right: RelTerm


@dataclass(frozen=True)
class FNot:
    arg: "RelFormula"


@dataclass(frozen=True)
class FOr:
    args: tuple["RelFormula", ...]


@dataclass(frozen=True)
class FAnd:
    args: tuple["RelFormula", ...]


@dataclass(frozen=True)
class FImp:
    left: "RelFormula"
    right: "RelFormula"


@dataclass(frozen=True)
class FIff:
    left: "RelFormula"
    right: "RelFormula"


@dataclass(frozen=True)
class FExists:
    vars: tuple[str, ...]
    body: "RelFormula"


@dataclass(frozen=True)
class FForall:
    vars: tuple[str, ...]
    body: "RelFormula"


RelFormula = Union[FRel, FEq, FNot, FOr, FAnd, FImp, FIff, FExists, FForall]

FALSE_F = FOr(())
TRUE_F = FAnd(())


def free_vars(f: RelFormula) -> frozenset[str]:
    if isinstance(f, FRel):
        return frozenset((f.x, f.y))
    if isinstance(f, FEq):
        return frozenset()
    if isinstance(f, FNot):
        return free_vars(f.arg)
    if isinstance(f, (FOr, FAnd)):
        return frozenset().union(*(free_vars(a) for a in f.args))
    if isinstance(f, (FImp, FIff)):
        return free_vars(f.left) | free_vars(f.right)
    return free_vars(f.body) - set(f.vars)


def formula_symbols(f: RelFormula) -> Iterator[str]:
    if isinstance(f, FRel):
        yield from relterm_symbols(f.term)
    elif isinstance(f, FEq):
        yield from relterm_symbols(f.left)
        yield from relterm_symbols(f.right)
    elif isinstance(f, FNot):
        yield from formula_symbols(f.arg)
    elif isinstance(f, (FOr, FAnd)):
        for a in f.args:
            yield from formula_symbols(a)
    elif isinstance(f, (FImp, FIff)):
        yield from formula_symbols(f.left)
        yield from formula_symbols(f.right)
    else:
        yield from formula_symbols(f.body)


def format_formula(f: RelFormula, nested: bool = False) -> str:
    if isinstance(f, FRel):
        return f"{f.x} {format_relterm(f.term, True)} {f.y}"
    if isinstance(f, FEq):
        return f"{format_relterm(f.left)} = {format_relterm(f.right)}"
    if isinstance(f, FNot):
        return f"!{format_formula(f.arg, True)}"
    if isinstance(f, (FOr, FAnd)):
        if not f.args:
            return "false" if isinstance(f, FOr) else "true"
        if len(f.args) == 1:
            # a one-element junction prints with its operator so it round-trips
            op = "or" if isinstance(f, FOr) else "and"
            return f"{op}({format_formula(f.args[0])})"
        op = " | " if isinstance(f, FOr) else " & "
        s = op.join(format_formula(a, True) for a in f.args)
        return f"({s})" if nested else s
    if isinstance(f, (FImp, FIff)):
        op = " -> " if isinstance(f, FImp) else " <=> "
        s = f"{format_formula(f.left, True)}{op}{format_formula(f.right, True)}"
        return f"({s})" if nested else s
    q = "exists" if isinstance(f, FExists) else "forall"
    s = f"{q} {', '.join(f.vars)} . {format_formula(f.body, True)}"
    return f"({s})" if nested else s
