"""Recursive-descent parser for ``.rks`` files.

Declarations must precede their uses. Errors never escape as exceptions: each
failed declaration yields a Diagnostic and parsing resumes at the next
top-level keyword.
"""

from __future__ import annotations

import difflib

from relkit.dsl.diagnostics import Diagnostic, ParseFailed
from relkit.dsl.lexer import Token, tokenize
from relkit.dsl.workspace import (
    LOGIC_NAMES,
    CheckJob,
    EntailJob,
    MapDecl,
    MorphismJob,
    VerifyJob,
    Workspace,
)
from relkit.entail import EntailBudget, SchemaSentence
from relkit.eqcore import (
    EqSignature,
    Equation,
    PredApp,
    Sentence,
    SumSignature,
    Tagged,
    Term,
    Var,
)
from relkit.errors import RelkitError
from relkit.logics import formulas as lf
from relkit.logics.common import QuantDomain
from relkit.relalg import terms as rt
from relkit.relalg.frame import MACROS, Condition, FiniteFrame, FrameMap
from relkit.theoria import ConstDef, FuncDef, PredDef, mk_interpretation, mk_state

TOP_KEYWORDS = frozenset(
    "signature interpretation state frame conditions map quant budget entail verify check morphism".split()
)
TERM_OPS = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 3}
PRED_OPS = ("<", "<=", ">", ">=")
FORMULA_KEYWORDS = frozenset(
    "X F G U R W M E A EX AX EF AF EG AG true false exists if then else while do".split()
)
LOGIC_NODES = {
    "ltl": lf.LTL_NODES,
    "ctl": lf.CTL_NODES,
    "pdl": lf.FODL_NODES,
    "ctlstar": lf.FOCTLSTAR_NODES,
}
MAX_NESTING = 200


class _Abort(Exception):
    def __init__(self, diag: Diagnostic):
        self.diag = diag


# symbol-resolution contexts for terms


class _RigidCtx:
    """Plain symbols of one signature, plus schema metavariables."""

    def __init__(self, sig: EqSignature, metavars: tuple[str, ...] = ()):
        self.sig = sig
        self.metavars = metavars

    def names(self) -> list[str]:
        return [str(s) for s in self.sig.symbols()] + list(self.metavars)

    def leaf(self, p: "Parser", tok: Token, tag: str | None):
        if tag is not None:
            p.fail(f"tag {tag}(...) is only allowed over a sum signature", tok)
        if tok.text in self.metavars:
            return Var(tok.text)
        return p.symbol(self.sig, tok.text, tok, "const", 0, self.names())

    def head(self, p: "Parser", tok: Token, kind: str, arity: int):
        return p.symbol(self.sig, tok.text, tok, kind, arity, self.names())

    def is_pred(self, name: str) -> bool:
        return name in self.sig and self.sig.kind(name) == "pred"


class _SumCtx:
    """Rigid and flexible symbols; bare names resolve to whichever side declares them."""

    def __init__(self, sigma: SumSignature):
        self.sigma = sigma

    def names(self) -> list[str]:
        return [str(s) for s in self.sigma.left.symbols()] + [str(s) for s in self.sigma.right.symbols()]

    def _tagged(self, p: "Parser", name: str, tok: Token) -> Tagged:
        try:
            return self.sigma.resolve(name)
        except RelkitError as exc:
            sugg = difflib.get_close_matches(name, self.names(), n=1)
            if name in self.sigma.left and name in self.sigma.right:
                p.fail(str(exc), tok)
            p.fail(f"unresolved symbol '{name}'", tok, sugg[0] if sugg else None)
        raise AssertionError

    def leaf(self, p: "Parser", tok: Token, tag: str | None):
        sym = Tagged(tag, tok.text) if tag is not None else self._tagged(p, tok.text, tok)
        return p.symbol(self.sigma.sig, sym, tok, "const", 0, self.names())

    def head(self, p: "Parser", tok: Token, kind: str, arity: int):
        return p.symbol(self.sigma.sig, self._tagged(p, tok.text, tok), tok, kind, arity, self.names())

    def is_pred(self, name: str) -> bool:
        return any(name in sig and sig.kind(name) == "pred" for sig in (self.sigma.left, self.sigma.right))


class Parser:
    def __init__(self, tokens: list[Token], ws: Workspace | None = None):
        self.toks = tokens
        self.i = 0
        self.ws = ws if ws is not None else Workspace()
        self.diags: list[Diagnostic] = []
        self.depth = 0
        self._last_state_sigs: tuple[str, str] | None = None

    # token helpers

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.peek()
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind != "eof" and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.peek()
            self.fail(f"expected '{text}' but found {_describe(t)}", t)
        return self.advance()

    def expect_ident(self, what: str = "a name") -> Token:
        t = self.peek()
        if t.kind != "ident":
            self.fail(f"expected {what} but found {_describe(t)}", t)
        return self.advance()

    def expect_num(self) -> int:
        t = self.peek()
        if t.kind != "num":
            self.fail(f"expected a number but found {_describe(t)}", t)
        self.advance()
        return int(t.text)

    def fail(self, msg: str, tok: Token | None = None, suggestion: str | None = None):
        tok = tok or self.peek()
        raise _Abort(Diagnostic("error", tok.line, tok.col, msg, suggestion))

    def symbol(self, sig: EqSignature, sym, tok: Token, kind: str, arity: int, names: list[str]):
        if sym not in sig:
            name = sym.name if isinstance(sym, Tagged) else sym
            sugg = difflib.get_close_matches(name, names, n=1)
            self.fail(f"unresolved symbol '{name}'", tok, sugg[0] if sugg else None)
        if sig.kind(sym) != kind:
            self.fail(f"'{tok.text}' is a {_KIND[sig.kind(sym)]}, expected a {_KIND[kind]}", tok)
        if sig.arity(sym) != arity:
            self.fail(f"'{tok.text}' takes {sig.arity(sym)} argument(s), given {arity}", tok)
        return sym

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail("expression nested too deeply")

    def _leave(self) -> None:
        self.depth -= 1

    def lookup(self, table: dict, kind: str, tok: Token):
        if tok.text not in table:
            sugg = difflib.get_close_matches(tok.text, list(table), n=1)
            self.fail(f"unknown {kind} '{tok.text}'", tok, sugg[0] if sugg else None)
        return table[tok.text]

    def declare(self, table: dict, kind: str, tok: Token) -> None:
        if tok.text in table:
            self.fail(f"{kind} '{tok.text}' is already declared", tok)

    # file level

    def parse_file(self) -> None:
        while self.peek().kind != "eof":
            start = self.i
            self.depth = 0
            try:
                self.declaration()
            except _Abort as exc:
                self.diags.append(exc.diag)
                self.recover(start)

    def recover(self, start: int) -> None:
        if self.i == start:
            self.advance()
        while self.peek().kind != "eof":
            prev = self.toks[self.i - 1] if self.i else None
            t = self.peek()
            if t.kind == "ident" and t.text in TOP_KEYWORDS and (prev is None or prev.text in (";", "}")):
                return
            self.advance()

    def declaration(self) -> None:
        t = self.peek()
        if t.kind != "ident" or t.text not in TOP_KEYWORDS:
            sugg = difflib.get_close_matches(t.text, sorted(TOP_KEYWORDS), n=1) if t.kind == "ident" else []
            self.fail(f"expected a declaration but found {_describe(t)}", t, sugg[0] if sugg else None)
        getattr(self, "decl_" + t.text)()

    # declarations

    def decl_signature(self) -> None:
        self.advance()
        name = self.expect_ident("a signature name")
        self.declare(self.ws.signatures, "signature", name)
        self.expect("{")
        consts: list[str] = []
        funcs: list[tuple[str, int]] = []
        preds: list[tuple[str, int]] = []
        while not self.accept("}"):
            kw = self.expect_ident("'const', 'func' or 'pred'")
            if kw.text == "const":
                while True:
                    consts.append(self.symbol_name(binary_only=False, tok_kind="const").text)
                    if not self.accept(","):
                        break
            elif kw.text in ("func", "pred"):
                while True:
                    sym = self.symbol_name(binary_only=True, tok_kind=kw.text)
                    self.expect(":")
                    arity = self.expect_num()
                    if sym.kind == "op" and arity != 2:
                        self.fail(f"operator '{sym.text}' must have arity 2", sym)
                    if kw.text == "func" and sym.kind == "op" and sym.text not in TERM_OPS:
                        self.fail(f"'{sym.text}' cannot name a function", sym)
                    if kw.text == "pred" and sym.kind == "op" and sym.text not in PRED_OPS:
                        self.fail(f"'{sym.text}' cannot name a predicate", sym)
                    (funcs if kw.text == "func" else preds).append((sym.text, arity))
                    if not self.accept(","):
                        break
            else:
                self.fail(f"expected 'const', 'func' or 'pred' but found '{kw.text}'", kw)
            self.expect(";")
        try:
            sig = EqSignature(consts, funcs, preds)
        except RelkitError as exc:
            self.fail(str(exc), name)
        if len(dict(funcs)) != len(funcs) or len(dict(preds)) != len(preds):
            self.fail("duplicate symbol in signature", name)
        self.ws.signatures[name.text] = sig
        self.ws.order.append(("signature", name.text))

    def symbol_name(self, binary_only: bool, tok_kind: str) -> Token:
        t = self.peek()
        if t.kind in ("ident", "num"):
            return self.advance()
        if binary_only and t.kind == "op" and (t.text in TERM_OPS or t.text in PRED_OPS):
            return self.advance()
        self.fail(f"expected a {tok_kind} symbol but found {_describe(t)}", t)

    def decl_interpretation(self) -> None:
        self.advance()
        name = self.expect_ident("an interpretation name")
        self.declare(self.ws.interpretations, "interpretation", name)
        self.expect("over")
        sig_tok = self.expect_ident("a signature name")
        sig = self.lookup(self.ws.signatures, "signature", sig_tok)
        self.expect("{")
        axioms: list[Sentence] = []
        families: list[tuple[SchemaSentence, ...]] = []
        while not self.accept("}"):
            kw = self.expect_ident("'axiom' or 'schema'")
            if kw.text == "axiom":
                axioms.append(self.sentence(_RigidCtx(sig)))
            elif kw.text == "schema":
                families.append(self.schema_family(sig))
            else:
                self.fail(f"expected 'axiom' or 'schema' but found '{kw.text}'", kw)
            self.expect(";")
        try:
            interp = mk_interpretation(sig, axioms, families)
        except RelkitError as exc:
            self.fail(str(exc), name)
        self.ws.interpretations[name.text] = interp
        self.ws.interp_sig[name.text] = sig_tok.text
        self.ws.order.append(("interpretation", name.text))

    def schema_family(self, sig: EqSignature) -> tuple[SchemaSentence, ...]:
        vars_: list[str] = []
        while True:
            v = self.expect_ident("a metavariable")
            if v.text in sig:
                self.fail(f"metavariable '{v.text}' clashes with a signature symbol", v)
            if v.text in vars_:
                self.fail(f"metavariable '{v.text}' declared twice", v)
            vars_.append(v.text)
            if not self.accept(","):
                break
        ctx = _RigidCtx(sig, tuple(vars_))
        guards: list[tuple[str, Term]] = []
        if self.accept("where"):
            while True:
                v = self.expect_ident("a metavariable")
                if v.text not in vars_:
                    self.fail(f"'{v.text}' is not a metavariable of this schema", v)
                self.expect("!=")
                guards.append((v.text, self.term(_RigidCtx(sig))))
                if not self.accept(","):
                    break
        self.expect(":")
        bodies = [self.sentence(ctx)]
        while self.accept(","):
            bodies.append(self.sentence(ctx))
        out = []
        for body in bodies:
            used = set(_sentence_vars(body))
            mv = tuple(v for v in vars_ if v in used)
            gs = tuple((v, t) for v, t in guards if v in used)
            out.append(SchemaSentence(mv, body, gs))
        return tuple(out)

    def decl_state(self) -> None:
        self.advance()
        name = self.expect_ident("a state name")
        self.declare(self.ws.states, "state", name)
        if self.accept("over"):
            ft = self.expect_ident("a signature name")
            flex = self.lookup(self.ws.signatures, "signature", ft)
            self.expect(",")
            rtok = self.expect_ident("a signature name")
            rigid = self.lookup(self.ws.signatures, "signature", rtok)
            sigs = (ft.text, rtok.text)
        elif self._last_state_sigs is not None:
            sigs = self._last_state_sigs
            flex, rigid = self.ws.signatures[sigs[0]], self.ws.signatures[sigs[1]]
        else:
            self.fail("state needs 'over <flexible signature>, <rigid signature>'", self.peek())
        self.expect("{")
        defs = []
        rctx = _RigidCtx(rigid)
        while not self.at("}"):
            lhs = self.expect_ident("a flexible symbol")
            if lhs.text not in flex:
                sugg = difflib.get_close_matches(lhs.text, [str(s) for s in flex.symbols()], n=1)
                self.fail(f"unresolved symbol '{lhs.text}'", lhs, sugg[0] if sugg else None)
            args: list[Term] = []
            if self.accept("("):
                args.append(self.term(rctx))
                while self.accept(","):
                    args.append(self.term(rctx))
                self.expect(")")
            if self.accept(":="):
                rhs = self.term(rctx)
                defs.append(FuncDef(lhs.text, tuple(args), rhs) if args else ConstDef(lhs.text, rhs))
            else:
                defs.append(PredDef(lhs.text, tuple(args)))
            if not self.accept(";"):
                break
        self.expect("}")
        try:
            st = mk_state(flex, rigid, defs)
        except RelkitError as exc:
            self.fail(str(exc), name)
        self._last_state_sigs = sigs
        self.ws.states[name.text] = st
        self.ws.state_sigs[name.text] = sigs
        self.ws.order.append(("state", name.text))

    def decl_frame(self) -> None:
        self.advance()
        name = self.expect_ident("a frame name")
        self.declare(self.ws.frames, "frame", name)
        self.expect("{")
        self.expect("states")
        base: list[str] = []
        while not self.at(";"):
            t = self.expect_ident("a state name")
            self.lookup(self.ws.states, "state", t)
            if t.text in base:
                self.fail(f"state '{t.text}' listed twice", t)
            base.append(t.text)
            self.accept(",")
        self.expect(";")
        if not base:
            self.fail("frame base must be non-empty", name)
        sigs = {self.ws.state_sigs[s] for s in base}
        if len(sigs) > 1:
            self.fail("frame states must share one flexible/rigid signature pair", name)
        rels: dict[str, list[tuple[str, str]]] = {}
        while not self.accept("}"):
            self.expect("rel")
            r = self.expect_ident("a relation name")
            if r.text in rels:
                self.fail(f"relation '{r.text}' declared twice", r)
            self.expect("=")
            self.expect("{")
            pairs = []
            while not self.at("}"):
                self.expect("(")
                a = self.expect_ident("a state name")
                self.expect(",")
                b = self.expect_ident("a state name")
                self.expect(")")
                for t in (a, b):
                    if t.text not in base:
                        self.fail(f"state '{t.text}' is not in this frame", t)
                pairs.append((a.text, b.text))
                if not self.accept(","):
                    break
            self.expect("}")
            self.expect(";")
            rels[r.text] = pairs
        st = {s: self.ws.states[s] for s in base}
        flex, rigid = (self.ws.signatures[x] for x in next(iter(sigs)))
        self.ws.frames[name.text] = FiniteFrame(base, rels, st, flex, rigid)
        self.ws.order.append(("frame", name.text))

    def decl_conditions(self) -> None:
        self.advance()
        name = self.expect_ident("a condition-set name")
        self.declare(self.ws.conditions, "conditions", name)
        self.expect("{")
        out: list[Condition] = []
        while not self.accept("}"):
            kw = self.expect_ident("a macro name or 'formula'")
            if kw.text in MACROS:
                rel = self.expect_ident("a relation name")
                out.append(Condition.macro(kw.text, rel.text))
            elif kw.text == "formula":
                phi = self.rel_formula()
                free = rt.free_vars(phi)
                if free:
                    self.fail(f"condition has free point variable(s) {', '.join(sorted(free))}", kw)
                out.append(Condition(rt.format_formula(phi), phi))
            else:
                sugg = difflib.get_close_matches(kw.text, list(MACROS) + ["formula"], n=1)
                self.fail(f"unknown condition '{kw.text}'", kw, sugg[0] if sugg else None)
            self.expect(";")
        self.ws.conditions[name.text] = tuple(out)
        self.ws.order.append(("conditions", name.text))

    def decl_map(self) -> None:
        self.advance()
        name = self.expect_ident("a map name")
        self.declare(self.ws.maps, "map", name)
        self.expect(":")
        st = self.expect_ident("a frame name")
        src = self.lookup(self.ws.frames, "frame", st)
        self.expect("->")
        dt = self.expect_ident("a frame name")
        dst = self.lookup(self.ws.frames, "frame", dt)
        self.expect("{")
        rel_map: dict[str, str] = {}
        h: dict[str, str] = {}
        while not self.accept("}"):
            is_rel = self.accept("rel")
            a = self.expect_ident()
            self.expect("->")
            b = self.expect_ident()
            if is_rel:
                for t, f in ((a, src), (b, dst)):
                    if t.text not in f.rels:
                        self.fail(f"relation '{t.text}' is not declared in the frame", t)
                target = rel_map
            else:
                for t, f in ((a, src), (b, dst)):
                    if t.text not in f.index:
                        self.fail(f"state '{t.text}' is not in the frame", t)
                target = h
            if a.text in target:
                self.fail(f"'{a.text}' is mapped twice", a)
            target[a.text] = b.text
            self.expect(";")
        self.ws.maps[name.text] = MapDecl(st.text, dt.text, FrameMap(rel_map, h))
        self.ws.order.append(("map", name.text))

    def decl_quant(self) -> None:
        self.advance()
        name = self.expect_ident("a quantifier-domain name")
        self.declare(self.ws.quants, "quant", name)
        self.expect("over")
        sig_tok = self.expect_ident("a signature name")
        sig = self.lookup(self.ws.signatures, "signature", sig_tok)
        self.expect("{")
        ranges: dict[str, tuple[Term, ...]] = {}
        ctx = _RigidCtx(sig)
        while not self.accept("}"):
            x = self.expect_ident("a flexible constant")
            if x.text in ranges:
                self.fail(f"'{x.text}' has two domains", x)
            self.expect(":")
            ts = [self.term(ctx)]
            while self.accept(","):
                ts.append(self.term(ctx))
            self.expect(";")
            ranges[x.text] = tuple(ts)
        self.ws.quants[name.text] = QuantDomain(ranges)
        self.ws.quant_sig[name.text] = sig_tok.text
        self.ws.order.append(("quant", name.text))

    def decl_budget(self) -> None:
        kw = self.advance()
        if self.ws.budget is not None:
            self.fail("budget declared twice", kw)
        opts = {"depth": 3, "max_inst": 10000}
        while True:
            o = self.expect_ident("'depth' or 'max_inst'")
            if o.text not in opts:
                self.fail(f"unknown budget option '{o.text}'", o)
            opts[o.text] = self.expect_num()
            if not self.accept(","):
                break
        self.expect(";")
        self.ws.budget = EntailBudget(opts["depth"], opts["max_inst"])
        self.ws.order.append(("budget", None))

    # jobs

    def _job(self, job) -> None:
        self.ws.order.append(("job", len(self.ws.jobs)))
        self.ws.jobs.append(job)

    def options(self, allowed: tuple[str, ...]) -> dict:
        opts: dict = {}
        while self.peek().kind == "ident" and self.peek().text in allowed:
            o = self.advance()
            if o.text in opts:
                self.fail(f"option '{o.text}' given twice", o)
            if o.text == "deterministic":
                opts[o.text] = True
            elif o.text in ("depth", "max_inst", "bound"):
                v = self.expect_num()
                if o.text == "bound" and v < 1:
                    self.fail("bound must be at least 1", o)
                opts[o.text] = v
            elif o.text == "with":
                opts["interp"] = self.expect_ident("an interpretation name")
                self.lookup(self.ws.interpretations, "interpretation", opts["interp"])
            else:
                opts[o.text] = self.expect_ident()
        return opts

    def decl_entail(self) -> None:
        self.advance()
        it = self.expect_ident("an interpretation name")
        interp = self.lookup(self.ws.interpretations, "interpretation", it)
        state = None
        if self.accept("with"):
            stok = self.expect_ident("a state name")
            st = self.lookup(self.ws.states, "state", stok)
            if st.rigid_sig != interp.rigid_sig:
                self.fail("state and interpretation use different rigid signatures", stok)
            state = stok.text
        opts = self.options(("depth", "max_inst"))
        self.expect(":")
        if state is None:
            goal = self.sentence(_RigidCtx(interp.rigid_sig))
        else:
            goal = self.sentence(_SumCtx(self.ws.states[state].sum))
        self.expect(";")
        self._job(EntailJob(it.text, goal, state, opts.get("depth"), opts.get("max_inst")))

    def decl_verify(self) -> None:
        self.advance()
        ft = self.expect_ident("a frame name")
        self.lookup(self.ws.frames, "frame", ft)
        if self.accept("selftest"):
            job = VerifyJob(ft.text, None, True)
        else:
            self.expect(":")
            ct = self.expect_ident("a condition-set name")
            self.lookup(self.ws.conditions, "conditions", ct)
            job = VerifyJob(ft.text, ct.text)
        self.expect(";")
        self._job(job)

    def decl_check(self) -> None:
        self.advance()
        lt = self.expect_ident("a logic (ltl, ctl, pdl, ctlstar)")
        if lt.text not in LOGIC_NAMES:
            sugg = difflib.get_close_matches(lt.text, LOGIC_NAMES, n=1)
            self.fail(f"unknown logic '{lt.text}'", lt, sugg[0] if sugg else None)
        ft = self.expect_ident("a frame name")
        frame = self.lookup(self.ws.frames, "frame", ft)
        self.expect("at")
        at = self.expect_ident("a state name")
        if at.text not in frame.index:
            self.fail(f"state '{at.text}' is not in frame '{ft.text}'", at)
        opts = self.options(("with", "quant", "bound", "depth", "deterministic"))
        interp = opts.get("interp")
        if interp is not None and self.ws.interpretations[interp.text].rigid_sig != frame.rigid_sig:
            self.fail("interpretation and frame use different rigid signatures", interp)
        quant = opts.get("quant")
        if quant is not None:
            self.lookup(self.ws.quants, "quant", quant)
        self.expect(":")
        phi = self.logic_formula(lt.text, SumSignature(frame.rigid_sig, frame.flexible_sig))
        self.expect(";")
        self._job(
            CheckJob(
                lt.text,
                ft.text,
                at.text,
                phi,
                interp.text if interp else None,
                quant.text if quant else None,
                opts.get("bound"),
                opts.get("depth"),
                opts.get("deterministic", False),
            )
        )

    def decl_morphism(self) -> None:
        self.advance()
        mt = self.expect_ident("a map name")
        m = self.lookup(self.ws.maps, "map", mt)
        opts = self.options(("with", "depth"))
        interp = opts.get("interp")
        if interp is not None and self.ws.interpretations[interp.text].rigid_sig != self.ws.frames[m.src].rigid_sig:
            self.fail("interpretation and frames use different rigid signatures", interp)
        self.expect(";")
        self._job(MorphismJob(mt.text, interp.text if interp else None, opts.get("depth")))

    # equational terms and atoms

    def term(self, ctx, level: int = 1) -> Term:
        self._enter()
        try:
            if level > 3:
                return self.term_atom(ctx)
            left = self.term(ctx, level + 1)
            while self.peek().kind == "op" and TERM_OPS.get(self.peek().text) == level:
                op = self.advance()
                head = ctx.head(self, op, "func", 2)
                right = self.term(ctx, level if level == 3 else level + 1)
                left = Term(head, (left, right))
                if level == 3:
                    break
            return left
        finally:
            self._leave()

    def term_atom(self, ctx) -> Term:
        t = self.peek()
        if self.accept("("):
            inner = self.term(ctx)
            self.expect(")")
            return inner
        if t.kind == "ident" and t.text in ("in_l", "in_r") and self.at("(", 1):
            self.advance()
            self.advance()
            name = self.peek()
            if name.kind not in ("ident", "num"):
                self.fail(f"expected a symbol but found {_describe(name)}", name)
            self.advance()
            self.expect(")")
            return Term(ctx.leaf(self, name, t.text[-1]))
        if t.kind not in ("ident", "num"):
            self.fail(f"expected a term but found {_describe(t)}", t)
        self.advance()
        if self.at("("):
            self.advance()
            args = [self.term(ctx)]
            while self.accept(","):
                args.append(self.term(ctx))
            self.expect(")")
            return Term(ctx.head(self, t, "func", len(args)), tuple(args))
        leaf = ctx.leaf(self, t, None)
        return leaf if isinstance(leaf, Var) else Term(leaf)

    def sentence(self, ctx) -> Sentence:
        t = self.peek()
        if t.kind == "ident" and ctx.is_pred(t.text) and not self.at("=", 1):
            self.advance()
            args: list[Term] = []
            if self.accept("("):
                args.append(self.term(ctx))
                while self.accept(","):
                    args.append(self.term(ctx))
                self.expect(")")
            return PredApp(ctx.head(self, t, "pred", len(args)), tuple(args))
        lhs = self.term(ctx)
        op = self.peek()
        if self.accept("="):
            return Equation(lhs, self.term(ctx))
        if op.kind == "op" and op.text in PRED_OPS:
            self.advance()
            pred = ctx.head(self, op, "pred", 2)
            return PredApp(pred, (lhs, self.term(ctx)))
        self.fail(f"expected '=' or a predicate after the term, found {_describe(op)}", op)

    # logic formulas

    def logic_formula(self, logic: str, sigma: SumSignature) -> lf.Formula:
        start = self.peek()
        self._logic = logic
        self._ctx = _SumCtx(sigma)
        phi = self.f_quant()
        if not lf.uses_only(phi, LOGIC_NODES[logic]):
            bad = next(
                (type(s).__name__ for s in _all_subformulas(phi) if not isinstance(s, LOGIC_NODES[logic])),
                "operator",
            )
            self.fail(f"{_NODE_NAMES.get(bad, bad)} is not allowed in {logic}", start)
        if logic == "ctlstar":
            from relkit.logics.foctlstar import is_state_formula

            for sub in _all_subformulas(phi):
                if isinstance(sub, lf.Exists) and not is_state_formula(sub.arg):
                    self.fail("the body of exists must be a state formula", start)
            if not is_state_formula(phi):
                self.fail("a ctlstar check needs a state formula; wrap path formulas in E[...]", start)
        return phi

    def f_quant(self) -> lf.Formula:
        self._enter()
        try:
            if self.accept("exists"):
                x = self.expect_ident("a flexible constant")
                sig = self._ctx.sigma.right
                if x.text not in sig or sig.kind(x.text) != "const":
                    self.fail(f"'{x.text}' is not a flexible constant", x)
                self.expect(".")
                return lf.Exists(x.text, self.f_quant())
            return self.f_imp()
        finally:
            self._leave()

    def f_imp(self) -> lf.Formula:
        left = self.f_or()
        if self.accept("->"):
            return lf.implies(left, self.f_quant())
        return left

    def f_or(self) -> lf.Formula:
        left = self.f_and()
        while self.accept("|"):
            left = lf.Or(left, self.f_and())
        return left

    def f_and(self) -> lf.Formula:
        left = self.f_until()
        while self.accept("&"):
            left = lf.And(left, self.f_until())
        return left

    def f_until(self) -> lf.Formula:
        left = self.f_unary()
        for kw, build in (("U", lf.Until), ("R", lf.R), ("W", lf.W), ("M", lf.M)):
            if self.at(kw) and self.peek().kind == "ident":
                self.advance()
                self._enter()
                try:
                    return build(left, self.f_until())
                finally:
                    self._leave()
        return left

    _PREFIX = {
        "X": lf.Next,
        "F": lf.F,
        "G": lf.G,
        "EX": lf.EX,
        "AX": lf.AX,
        "EF": lf.EF,
        "AF": lf.AF,
        "EG": lf.EG,
        "AG": lf.AG,
    }

    def f_unary(self) -> lf.Formula:
        self._enter()
        try:
            t = self.peek()
            if self.accept("!"):
                return lf.Not(self.f_unary())
            if t.kind == "ident" and t.text in self._PREFIX:
                self.advance()
                return self._PREFIX[t.text](self.f_unary())
            if t.kind == "ident" and t.text in ("E", "A"):
                self.advance()
                return self.path_quantifier(t)
            if self.accept("<"):
                p = self.program()
                self.expect(">")
                return lf.Diamond(p, self.f_unary())
            if self.accept("["):
                p = self.program()
                self.expect("]")
                return lf.box(p, self.f_unary())
            return self.f_primary()
        finally:
            self._leave()

    def path_quantifier(self, t: Token) -> lf.Formula:
        if self._logic == "ctl":
            self.expect("[")
            inner = self.f_quant()
            self.expect("]")
            if not isinstance(inner, lf.Until):
                self.fail(f"{t.text}[...] in ctl must contain an until formula", t)
            return lf.EU(inner.left, inner.right) if t.text == "E" else lf.AU(inner.left, inner.right)
        if self.accept("["):
            inner = self.f_quant()
            self.expect("]")
        else:
            inner = self.f_unary()
        return lf.E(inner) if t.text == "E" else lf.Not(lf.E(lf.Not(inner)))

    def f_primary(self) -> lf.Formula:
        t = self.peek()
        if self.accept("true"):
            return lf.TRUE
        if self.accept("false"):
            return lf.FALSE
        if t.kind == "ident" and t.text in FORMULA_KEYWORDS:
            self.fail(f"unexpected keyword '{t.text}'", t)
        if t.text == "(":
            mark = self.i
            try:
                return lf.Atom(self.sentence(self._ctx))
            except _Abort:
                self.i = mark
            self.advance()
            inner = self.f_quant()
            self.expect(")")
            return inner
        return lf.Atom(self.sentence(self._ctx))

    def program(self) -> lf.Program:
        self._enter()
        try:
            left = self.p_seq()
            while self.accept("+"):
                left = lf.PUnion(left, self.p_seq())
            return left
        finally:
            self._leave()

    def p_seq(self) -> lf.Program:
        left = self.p_star()
        while self.accept(";"):
            left = lf.PSeq(left, self.p_star())
        return left

    def p_star(self) -> lf.Program:
        p = self.p_primary()
        while self.accept("*"):
            p = lf.PStar(p)
        return p

    def p_primary(self) -> lf.Program:
        if self.accept("if"):
            cond = self.f_quant()
            self.expect("then")
            p = self.program()
            self.expect("else")
            return lf.if_then_else(cond, p, self.program())
        if self.accept("while"):
            cond = self.f_quant()
            self.expect("do")
            return lf.while_do(cond, self.program())
        if self.accept("("):
            mark = self.i
            try:
                p = self.program()
                self.expect(")")
                if not self.at("?"):
                    return p
            except _Abort:
                pass
            self.i = mark
            cond = self.f_quant()
            self.expect(")")
            self.expect("?")
            return lf.PTest(cond)
        name = self.expect_ident("a program")
        if name.text in FORMULA_KEYWORDS:
            self.fail(f"unexpected keyword '{name.text}'", name)
        return lf.PAtom(name.text)

    # relational formulas

    def rel_formula(self) -> rt.RelFormula:
        self._enter()
        try:
            if self.peek().text in ("exists", "forall") and self.peek().kind == "ident":
                q = self.advance()
                vs = [self.expect_ident("a point variable").text]
                while self.accept(","):
                    vs.append(self.expect_ident("a point variable").text)
                self.expect(".")
                body = self.rel_formula()
                return (rt.FExists if q.text == "exists" else rt.FForall)(tuple(vs), body)
            left = self.rf_imp()
            return left
        finally:
            self._leave()

    def rf_imp(self) -> rt.RelFormula:
        left = self.rf_or()
        if self.accept("<=>"):
            return rt.FIff(left, self.rf_or())
        if self.accept("->"):
            return rt.FImp(left, self.rf_or())
        return left

    def rf_or(self) -> rt.RelFormula:
        args = [self.rf_and()]
        while self.accept("|"):
            args.append(self.rf_and())
        return args[0] if len(args) == 1 else rt.FOr(tuple(args))

    def rf_and(self) -> rt.RelFormula:
        args = [self.rf_unary()]
        while self.accept("&"):
            args.append(self.rf_unary())
        return args[0] if len(args) == 1 else rt.FAnd(tuple(args))

    def rf_unary(self) -> rt.RelFormula:
        self._enter()
        try:
            if self.accept("!"):
                return rt.FNot(self.rf_unary())
            t = self.peek()
            if t.kind == "ident" and t.text in ("exists", "forall"):
                return self.rel_formula()
            if t.kind == "ident" and t.text in ("true", "false"):
                self.advance()
                return rt.TRUE_F if t.text == "true" else rt.FALSE_F
            if t.kind == "ident" and t.text in ("or", "and") and self.at("(", 1):
                self.advance()
                self.advance()
                inner = self.rel_formula()
                self.expect(")")
                return (rt.FOr if t.text == "or" else rt.FAnd)((inner,))
            if t.text == "(":
                mark = self.i
                self.advance()
                try:
                    inner = self.rel_formula()
                    self.expect(")")
                    if not self.at("="):
                        return inner
                except _Abort:
                    pass
                self.i = mark
            return self.rf_atom()
        finally:
            self._leave()

    def rf_atom(self) -> rt.RelFormula:
        first = self.peek()
        left = self.relterm()
        if self.accept("="):
            return rt.FEq(left, self.relterm())
        if not isinstance(left, rt.RSym):
            self.fail(f"expected '=' after a relational term, found {_describe(self.peek())}", self.peek())
        term = self.relterm()
        y = self.expect_ident("a point variable")
        return rt.FRel(first.text, term, y.text)

    def relterm(self) -> rt.RelTerm:
        self._enter()
        try:
            left = self.rt_inter()
            while self.accept("+"):
                left = rt.RUnion(left, self.rt_inter())
            return left
        finally:
            self._leave()

    def rt_inter(self) -> rt.RelTerm:
        left = self.rt_comp()
        while self.accept("."):
            left = rt.RInter(left, self.rt_comp())
        return left

    def rt_comp(self) -> rt.RelTerm:
        left = self.rt_unary()
        while self.accept(";"):
            left = rt.RComp(left, self.rt_unary())
        return left

    def rt_unary(self) -> rt.RelTerm:
        self._enter()
        try:
            if self.accept("-"):
                return rt.RCompl(self.rt_unary())
            t = self.peek()
            if self.accept("("):
                inner = self.relterm()
                self.expect(")")
            elif self.accept("1'"):
                inner = rt.IDENT
            elif t.kind == "num" and t.text in ("0", "1"):
                self.advance()
                inner = rt.ZERO if t.text == "0" else rt.ONE
            elif t.kind == "ident" and t.text not in ("exists", "forall", "true", "false"):
                self.advance()
                inner = rt.RSym(t.text)
            else:
                self.fail(f"expected a relational term but found {_describe(t)}", t)
            while True:
                if self.accept("~"):
                    inner = rt.RConv(inner)
                elif self.accept("*"):
                    inner = rt.RStar(inner)
                else:
                    return inner
        finally:
            self._leave()


_KIND = {"const": "constant", "func": "function", "pred": "predicate"}
_NODE_NAMES = {
    "Next": "X",
    "Until": "U",
    "EX": "EX",
    "EG": "EG",
    "EU": "E[.. U ..]",
    "Diamond": "<program>",
    "Exists": "exists",
    "E": "E",
}


def _describe(t: Token) -> str:
    return "end of input" if t.kind == "eof" else f"'{t.text}'"


def _sentence_vars(s: Sentence):
    for t in s.terms():
        yield from _term_vars(t)


def _term_vars(t):
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from _term_vars(a)


def _all_subformulas(phi: lf.Formula):
    for sub in lf.subformulas(phi):
        yield sub
        if isinstance(sub, lf.Diamond):
            for c in lf.program_formulas(sub.program):
                yield from _all_subformulas(c)


def _decode(source: str | bytes) -> tuple[str | None, list[Diagnostic]]:
    if isinstance(source, bytes):
        try:
            return source.decode("utf-8"), []
        except UnicodeDecodeError as exc:
            line = source[: exc.start].count(b"\n") + 1
            col = exc.start - (source.rfind(b"\n", 0, exc.start) + 1) + 1
            return None, [Diagnostic("error", line, col, "input is not valid UTF-8")]
    return source, []


def parse_source(source: str | bytes) -> tuple[Workspace | None, list[Diagnostic]]:
    """Parse a whole file. Returns the workspace (None on any error) and diagnostics."""
    text, diags = _decode(source)
    if text is None:
        return None, diags
    tokens, diags = tokenize(text)
    p = Parser(tokens)
    try:
        p.parse_file()
    except RecursionError:
        t = p.peek()
        p.diags.append(Diagnostic("error", t.line, t.col, "expression nested too deeply"))
    diags = diags + p.diags
    return (None if diags else p.ws), diags


def parse(source: str | bytes) -> Workspace:
    ws, diags = parse_source(source)
    if ws is None:
        raise ParseFailed(diags)
    return ws


def _fragment(ws: Workspace, text: str, rule):
    tokens, diags = tokenize(text)
    if diags:
        raise ParseFailed(diags)
    p = Parser(tokens, ws)
    try:
        out = rule(p)
        if p.peek().kind != "eof":
            p.fail(f"unexpected {_describe(p.peek())} after the expression")
    except _Abort as exc:
        raise ParseFailed([exc.diag]) from None
    except RecursionError:
        raise ParseFailed([Diagnostic("error", 1, 1, "expression nested too deeply")]) from None
    return out


def parse_formula(ws: Workspace, logic: str, frame: str, text: str) -> lf.Formula:
    """Parse a standalone logic formula against a frame's signatures."""
    if frame not in ws.frames:
        raise ParseFailed([Diagnostic("error", 1, 1, f"unknown frame '{frame}'")])
    if logic not in LOGIC_NAMES:
        raise ParseFailed([Diagnostic("error", 1, 1, f"unknown logic '{logic}'")])
    return _fragment(ws, text, lambda p: p.logic_formula(logic, ws.frame_sum(frame)))


def parse_sentence(ws: Workspace, interp: str, state: str | None, text: str) -> Sentence:
    """Parse an entailment goal over an interpretation, or over its sum with a state."""
    if interp not in ws.interpretations:
        raise ParseFailed([Diagnostic("error", 1, 1, f"unknown interpretation '{interp}'")])
    if state is not None and state not in ws.states:
        raise ParseFailed([Diagnostic("error", 1, 1, f"unknown state '{state}'")])
    if state is None:
        ctx = _RigidCtx(ws.interpretations[interp].rigid_sig)
    else:
        ctx = _SumCtx(ws.states[state].sum)
    return _fragment(ws, text, lambda p: p.sentence(ctx))


def parse_rel_formula(text: str) -> rt.RelFormula:
    return _fragment(Workspace(), text, lambda p: p.rel_formula())
