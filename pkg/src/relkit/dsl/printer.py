"""Canonical source text for a Workspace; ``parse(print_workspace(w)) == w``."""

from __future__ import annotations

from relkit.dsl.workspace import CheckJob, EntailJob, MorphismJob, VerifyJob, Workspace
from relkit.entail import SchemaSentence
from relkit.eqcore import EqSignature, Equation, Sentence, SumSignature, Tagged, Term, Var, is_operator
from relkit.logics import formulas as lf
from relkit.relalg.frame import MACROS, Condition
from relkit.relalg.terms import format_formula as format_rel_formula
from relkit.theoria import ConstDef, FuncDef, InterpretationTheory, StateTheory


def _leaf(sym, sigma: SumSignature | None) -> str:
    if isinstance(sym, Tagged):
        if sigma is not None and sym.name in sigma.left and sym.name in sigma.right:
            return f"in_{sym.side}({sym.name})"
        return sym.name
    return sym


def _head(sym) -> str:
    return sym.name if isinstance(sym, Tagged) else sym


def print_term(t, sigma: SumSignature | None = None, nested: bool = False) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return _leaf(t.head, sigma)
    if len(t.args) == 2 and is_operator(t.head):
        s = f"{print_term(t.args[0], sigma, True)} {_head(t.head)} {print_term(t.args[1], sigma, True)}"
        return f"({s})" if nested else s
    return f"{_head(t.head)}({', '.join(print_term(a, sigma) for a in t.args)})"


def print_sentence(s: Sentence, sigma: SumSignature | None = None) -> str:
    if isinstance(s, Equation):
        return f"{print_term(s.lhs, sigma)} = {print_term(s.rhs, sigma)}"
    if len(s.args) == 2 and is_operator(s.pred):
        return f"{print_term(s.args[0], sigma)} {_head(s.pred)} {print_term(s.args[1], sigma)}"
    if not s.args:
        return _head(s.pred)
    return f"{_head(s.pred)}({', '.join(print_term(a, sigma) for a in s.args)})"


def print_formula(phi: lf.Formula, sigma: SumSignature, logic: str, nested: bool = False) -> str:
    def sub(x, nest=True):
        return print_formula(x, sigma, logic, nest)

    if isinstance(phi, lf.Atom):
        return print_sentence(phi.sentence, sigma)
    if isinstance(phi, lf.Top):
        return "true"
    if isinstance(phi, lf.Not):
        return f"!{sub(phi.arg)}"
    if isinstance(phi, lf.Next):
        return f"X {sub(phi.arg)}"
    if isinstance(phi, lf.EX):
        return f"EX {sub(phi.arg)}"
    if isinstance(phi, lf.EG):
        return f"EG {sub(phi.arg)}"
    if isinstance(phi, lf.EU):
        return f"E[{sub(phi.left)} U {sub(phi.right)}]"
    if isinstance(phi, lf.E):
        return f"E[{sub(phi.path, False)}]"
    if isinstance(phi, lf.Diamond):
        return f"<{print_program(phi.program, sigma, logic)}> {sub(phi.arg)}"
    if isinstance(phi, lf.Exists):
        s = f"exists {phi.var} . {sub(phi.arg, False)}"
        return f"({s})" if nested else s
    op = {lf.Or: "|", lf.And: "&", lf.Until: "U"}[type(phi)]
    s = f"{sub(phi.left)} {op} {sub(phi.right)}"
    return f"({s})" if nested else s


def print_program(p: lf.Program, sigma: SumSignature, logic: str, nested: bool = False) -> str:
    if isinstance(p, lf.PAtom):
        return p.name
    if isinstance(p, lf.PTest):
        return f"({print_formula(p.cond, sigma, logic)})?"
    if isinstance(p, lf.PStar):
        return f"{print_program(p.arg, sigma, logic, True)}*"
    op = "+" if isinstance(p, lf.PUnion) else ";"
    s = f"{print_program(p.left, sigma, logic, True)} {op} {print_program(p.right, sigma, logic, True)}"
    return f"({s})" if nested else s


def _signature(name: str, sig: EqSignature) -> list[str]:
    body = []
    if sig.constants:
        body.append(f"  const {', '.join(sig.constants)};")
    if sig.functions:
        body.append(f"  func {', '.join(f'{f} : {n}' for f, n in sig.functions.items())};")
    if sig.predicates:
        body.append(f"  pred {', '.join(f'{p} : {n}' for p, n in sig.predicates.items())};")
    if not body:
        return [f"signature {name} {{}}"]
    return [f"signature {name} {{", *body, "}"]


def _family(fam: tuple[SchemaSentence, ...]) -> str:
    vars_: list[str] = []
    guards: list[tuple[str, Term]] = []
    for s in fam:
        for v in s.metavars:
            if v not in vars_:
                vars_.append(v)
        for g in s.guards:
            if g not in guards:
                guards.append(g)
    head = f"  schema {', '.join(vars_)}"
    if guards:
        head += " where " + ", ".join(f"{v} != {print_term(t, None, True)}" for v, t in guards)
    return head + " : " + ", ".join(print_sentence(s.body) for s in fam) + ";"


def _interpretation(name: str, sig_name: str, i: InterpretationTheory) -> list[str]:
    lines = [f"  axiom {print_sentence(a)};" for a in i.axioms]
    families = i.families or tuple((s,) for s in i.schemas)
    lines += [_family(fam) for fam in families]
    if not lines:
        return [f"interpretation {name} over {sig_name} {{}}"]
    return [f"interpretation {name} over {sig_name} {{", *lines, "}"]


def _state(name: str, sigs: tuple[str, str], st: StateTheory) -> list[str]:
    lines = []
    for d in st.defs:
        args = f"({', '.join(print_term(a) for a in d.args)})" if getattr(d, "args", ()) else ""
        if isinstance(d, (ConstDef, FuncDef)):
            lines.append(f"  {d.symbol}{args} := {print_term(d.rhs)};")
        else:
            lines.append(f"  {d.symbol}{args};")
    head = f"state {name} over {sigs[0]}, {sigs[1]}"
    if not lines:
        return [head + " {}"]
    return [head + " {", *lines, "}"]


def _conditions(name: str, conds: tuple[Condition, ...]) -> list[str]:
    lines = []
    for c in conds:
        macro = None
        for m, build in MACROS.items():
            parts = c.label.split(" ")
            if len(parts) == 2 and parts[0] == m and build(parts[1]) == c.formula:
                macro = c.label
        lines.append(f"  {macro};" if macro else f"  formula {format_rel_formula(c.formula)};")
    if not lines:
        return [f"conditions {name} {{}}"]
    return [f"conditions {name} {{", *lines, "}"]


def _opts(pairs) -> str:
    out = ""
    for key, val in pairs:
        if val is None or val is False:
            continue
        out += f" {key}" if val is True else f" {key} {val}"
    return out


def _job(ws: Workspace, job) -> str:
    if isinstance(job, EntailJob):
        sigma = ws.states[job.state].sum if job.state else None
        head = f"entail {job.interp}" + (f" with {job.state}" if job.state else "")
        head += _opts((("depth", job.depth), ("max_inst", job.max_inst)))
        return f"{head} : {print_sentence(job.goal, sigma)};"
    if isinstance(job, VerifyJob):
        return f"verify {job.frame} selftest;" if job.selftest else f"verify {job.frame} : {job.conditions};"
    if isinstance(job, CheckJob):
        sigma = ws.frame_sum(job.frame)
        head = f"check {job.logic} {job.frame} at {job.at}"
        head += _opts(
            (
                ("with", job.interp),
                ("quant", job.quant),
                ("bound", job.bound),
                ("depth", job.depth),
                ("deterministic", job.deterministic),
            )
        )
        return f"{head} : {print_formula(job.formula, sigma, job.logic)};"
    assert isinstance(job, MorphismJob)
    return f"morphism {job.map}" + _opts((("with", job.interp), ("depth", job.depth))) + ";"


def print_workspace(ws: Workspace) -> str:
    blocks: list[str] = []
    for kind, name in ws.order:
        if kind == "signature":
            lines = _signature(name, ws.signatures[name])
        elif kind == "interpretation":
            lines = _interpretation(name, ws.interp_sig[name], ws.interpretations[name])
        elif kind == "state":
            lines = _state(name, ws.state_sigs[name], ws.states[name])
        elif kind == "frame":
            f = ws.frames[name]
            lines = [f"frame {name} {{", f"  states {', '.join(f.base)};"]
            for r in f.rels:
                pairs = ", ".join(f"({a}, {b})" for a, b in f.pairs(r))
                lines.append(f"  rel {r} = {{{pairs}}};")
            lines.append("}")
        elif kind == "conditions":
            lines = _conditions(name, ws.conditions[name])
        elif kind == "map":
            m = ws.maps[name]
            body = [f"  rel {a} -> {b};" for a, b in m.fmap.rel_map.items()]
            body += [f"  {a} -> {b};" for a, b in m.fmap.h.items()]
            lines = [f"map {name} : {m.src} -> {m.dst} {{", *body, "}"] if body else [
                f"map {name} : {m.src} -> {m.dst} {{}}"
            ]
        elif kind == "quant":
            q = ws.quants[name]
            sig = ws.quant_sig[name]
            body = [f"  {x} : {', '.join(print_term(t) for t in ts)};" for x, ts in q.ranges.items()]
            lines = [f"quant {name} over {sig} {{", *body, "}"] if body else [f"quant {name} over {sig} {{}}"]
        elif kind == "budget":
            b = ws.budget
            lines = [f"budget depth {b.max_term_depth}, max_inst {b.max_instantiations};"]
        else:
            lines = [_job(ws, ws.jobs[name])]
        blocks.append("\n".join(lines))
    return "".join(b + "\n" for b in blocks)
