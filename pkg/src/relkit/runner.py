"""Executes workspace jobs and packages the outcome as serialisable reports."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Any

from relkit.dsl.workspace import CheckJob, EntailJob, MorphismJob, VerifyJob, Workspace
from relkit.dsl.printer import print_formula, print_sentence
from relkit.entail import EntailBudget, entails
from relkit.logics import (
    LassoPath,
    ctl_labels,
    ctl_witness,
    fodl_check,
    foctlstar_check,
    ltl_check,
    path_from,
)
from relkit.relalg.axioms import axioms_selftest
from relkit.relalg.morphism import check_bounded_morphism
from relkit.relalg.frame import FrameReport, verify_frame_conditions
from relkit.theoria import mk_interpretation, pushout
from relkit.verdict import Truth, Verdict

DEFAULT_DEPTH = 3
DEFAULT_MAX_INST = 10000
EXIT = {"true": 0, "pass": 0, "false": 1, "fail": 1, "unknown": 2}
EXIT_ERROR = 3


@dataclass(frozen=True)
class Overrides:
    """Command-line settings that take precedence over the file."""

    depth: int | None = None
    max_inst: int | None = None
    bound: int | None = None
    quant: str | None = None


@dataclass
class JobReport:
    job: str
    verdict: str
    inputs: dict[str, Any]
    budget: dict[str, Any]
    reason: str | None = None
    witness: Any = None
    ms: float = 0.0
    detail: list[dict[str, Any]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT[self.verdict]

    def to_json(self) -> dict[str, Any]:
        out = {
            "job": self.job,
            "verdict": self.verdict,
            "reason": self.reason,
            "witness": jsonable(self.witness),
            "ms": round(self.ms, 3),
            "inputs": self.inputs,
            "budget": self.budget,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def jsonable(x: Any) -> Any:
    if isinstance(x, LassoPath):
        return {"prefix": list(x.prefix), "cycle": list(x.cycle)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def default_depth() -> int:
    env = os.environ.get("RELKIT_DEPTH")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_DEPTH


def resolve_budget(ws: Workspace, job_depth: int | None, job_max: int | None, ov: Overrides) -> EntailBudget:
    depth = ov.depth if ov.depth is not None else job_depth
    max_inst = ov.max_inst if ov.max_inst is not None else job_max
    if depth is None:
        depth = ws.budget.max_term_depth if ws.budget is not None else default_depth()
    if max_inst is None:
        max_inst = ws.budget.max_instantiations if ws.budget is not None else DEFAULT_MAX_INST
    return EntailBudget(depth, max_inst)


def _budget_dict(b: EntailBudget, **extra) -> dict[str, Any]:
    return {"depth": b.max_term_depth, "max_inst": b.max_instantiations, **extra}


def _verdict_name(v: Verdict) -> str:
    return {Truth.TRUE: "true", Truth.FALSE: "false", Truth.UNKNOWN: "unknown"}[v.truth]


def run_entail(ws: Workspace, job: EntailJob, ov: Overrides = Overrides()) -> JobReport:
    b = resolve_budget(ws, job.depth, job.max_inst, ov)
    interp = ws.interpretations[job.interp]
    theory = interp.theory if job.state is None else pushout(interp, ws.states[job.state])
    sigma = ws.states[job.state].sum if job.state else None
    v = entails(theory, job.goal, b)
    return JobReport(
        "entail",
        _verdict_name(v),
        {"interpretation": job.interp, "state": job.state, "goal": print_sentence(job.goal, sigma)},
        _budget_dict(b),
        v.reason,
        v.witness,
    )


def _report_from_frame(job: str, inputs: dict, rep: FrameReport, b: dict) -> JobReport:
    failures = rep.failures()
    witness = {r.label: r.witness for r in failures} or None
    detail = [{"condition": r.label, "passed": r.passed, "witness": r.witness} for r in rep]
    return JobReport(job, "pass" if rep.passed else "fail", inputs, b, None, witness, detail=detail)


def run_verify(ws: Workspace, job: VerifyJob, ov: Overrides = Overrides()) -> JobReport:
    f = ws.frames[job.frame]
    if job.selftest:
        rep = axioms_selftest(f)
    else:
        rep = verify_frame_conditions(f, ws.conditions[job.conditions])
    inputs = {"frame": job.frame, "conditions": job.conditions, "selftest": job.selftest}
    return _report_from_frame("frame-verify", inputs, rep, {})


def run_check(ws: Workspace, job: CheckJob, ov: Overrides = Overrides()) -> JobReport:
    b = resolve_budget(ws, job.depth, None, ov)
    f = ws.frames[job.frame]
    interp = ws.interpretations[job.interp] if job.interp else mk_interpretation(f.rigid_sig)
    quant = ov.quant if ov.quant is not None else job.quant
    qd = ws.quants[quant] if quant else None
    extra: dict[str, Any] = {}
    witness = None
    if job.logic == "ltl":
        pi = path_from(f, job.at)
        v = ltl_check(interp, f, pi, job.formula, b)
        witness = pi
    elif job.logic == "ctl":
        labels = ctl_labels(interp, f, job.formula, b)
        v = labels[job.formula][f.index[job.at]]
        witness = ctl_witness(f, labels, job.at, job.formula)
    elif job.logic == "pdl":
        v = fodl_check(interp, f, job.at, job.formula, qd, b, job.deterministic)
    else:
        bound = ov.bound if ov.bound is not None else job.bound if job.bound is not None else f.n
        extra["bound"] = bound
        v = foctlstar_check(interp, f, job.at, job.formula, qd, bound, b)
        witness = v.witness
    inputs = {
        "logic": job.logic,
        "frame": job.frame,
        "at": job.at,
        "formula": print_formula(job.formula, ws.frame_sum(job.frame), job.logic),
        "interpretation": job.interp,
        "quant": quant,
    }
    return JobReport("check", _verdict_name(v), inputs, _budget_dict(b, **extra), v.reason, witness)


def run_morphism(ws: Workspace, job: MorphismJob, ov: Overrides = Overrides()) -> JobReport:
    b = resolve_budget(ws, job.depth, None, ov)
    m = ws.maps[job.map]
    interp = ws.interpretations[job.interp] if job.interp else None
    v = check_bounded_morphism(ws.frames[m.src], ws.frames[m.dst], m.fmap, b, interp)
    inputs = {"map": job.map, "src": m.src, "dst": m.dst, "interpretation": job.interp}
    return JobReport("morphism", _verdict_name(v), inputs, _budget_dict(b), v.reason, v.witness)


_RUNNERS = {EntailJob: run_entail, VerifyJob: run_verify, CheckJob: run_check, MorphismJob: run_morphism}


def run_job(ws: Workspace, job, ov: Overrides = Overrides()) -> JobReport:
    t0 = time.perf_counter()
    rep = _RUNNERS[type(job)](ws, job, ov)
    rep.ms = (time.perf_counter() - t0) * 1000.0
    return rep


def describe_witness(w: Any) -> str:
    if isinstance(w, LassoPath):
        pre = " ".join(w.prefix)
        cyc = " ".join(w.cycle)
        return f"{pre + ' ' if pre else ''}({cyc})^w"
    return str(jsonable(w))
