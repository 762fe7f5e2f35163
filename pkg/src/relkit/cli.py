"""``relkit`` command line.

Exit codes: 0 true/pass, 1 false/fail, 2 unknown, 3 usage, parse or
frame-condition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from relkit.dsl import ParseFailed, parse_formula, parse_sentence, parse_source, print_workspace
from relkit.dsl.workspace import LOGIC_NAMES, CheckJob, EntailJob, MorphismJob, VerifyJob, Workspace
from relkit.errors import FrameConditionViolated, RelkitError
from relkit.runner import EXIT_ERROR, JobReport, Overrides, describe_witness, run_job


class UsageError(Exception):
    pass


def _read(paths: Sequence[str]) -> str:
    chunks = []
    for p in paths:
        if p == "-":
            chunks.append(sys.stdin.read())
        else:
            try:
                with open(p, encoding="utf-8", errors="strict") as fh:
                    chunks.append(fh.read())
            except (OSError, UnicodeDecodeError) as exc:
                raise UsageError(f"cannot read {p}: {exc}") from None
    return "\n".join(chunks)


def _load(paths: Sequence[str], source: str) -> Workspace:
    ws, diags = parse_source(source)
    if ws is None:
        label = paths[0] if len(paths) == 1 else "<input>"
        raise UsageError("\n".join(f"{label}:{d}" for d in diags))
    return ws


def _need(table: dict, kind: str, name: str | None) -> str:
    if name is None:
        raise UsageError(f"--{kind} is required")
    if name not in table:
        raise UsageError(f"unknown {kind} '{name}'")
    return name


def _overrides(args) -> Overrides:
    return Overrides(
        depth=getattr(args, "depth", None),
        max_inst=getattr(args, "max_inst", None),
        bound=getattr(args, "bound", None),
        quant=getattr(args, "quant", None),
    )


def _jobs_for(args, ws: Workspace) -> list:
    cmd = args.command
    if cmd == "run":
        return list(ws.jobs)
    if cmd == "entail":
        if args.goal is None:
            jobs = [j for j in ws.jobs if isinstance(j, EntailJob)]
            if args.theory:
                jobs = [j for j in jobs if j.interp == args.theory]
            return jobs
        interp = _need(ws.interpretations, "theory", args.theory)
        if args.state is not None:
            _need(ws.states, "state", args.state)
        goal = parse_sentence(ws, interp, args.state, args.goal)
        return [EntailJob(interp, goal, args.state)]
    if cmd == "frame-verify":
        frame = _need(ws.frames, "frame", args.frame)
        if args.axioms_selftest:
            return [VerifyJob(frame, None, True)]
        if args.conditions is None:
            jobs = [j for j in ws.jobs if isinstance(j, VerifyJob) and j.frame == frame]
            if not jobs:
                raise UsageError("give --conditions or --axioms-selftest")
            return jobs
        return [VerifyJob(frame, _need(ws.conditions, "conditions", args.conditions))]
    if cmd == "check":
        if args.formula is None:
            jobs = [j for j in ws.jobs if isinstance(j, CheckJob)]
            if args.frame:
                jobs = [j for j in jobs if j.frame == args.frame]
            if args.logic:
                jobs = [j for j in jobs if j.logic == args.logic]
            return jobs
        frame = _need(ws.frames, "frame", args.frame)
        if args.logic is None:
            raise UsageError("--logic is required with --formula")
        if args.at is None or args.at not in ws.frames[frame].index:
            raise UsageError(f"--at must name a state of frame '{frame}'")
        if args.interp is not None:
            _need(ws.interpretations, "with", args.interp)
        if args.quant is not None:
            _need(ws.quants, "quant", args.quant)
        phi = parse_formula(ws, args.logic, frame, args.formula)
        return [CheckJob(args.logic, frame, args.at, phi, args.interp, args.quant, None, None, args.deterministic)]
    if cmd == "morphism":
        if args.map is None:
            return [j for j in ws.jobs if isinstance(j, MorphismJob)]
        name = _need(ws.maps, "map", args.map)
        if args.interp is not None:
            _need(ws.interpretations, "with", args.interp)
        return [MorphismJob(name, args.interp)]
    raise UsageError(f"unknown command {cmd}")


def _emit(rep: JobReport, args, out) -> None:
    if args.json:
        out.write(json.dumps(rep.to_json()) + "\n")
        return
    inputs = ", ".join(f"{k}={v}" for k, v in rep.inputs.items() if v not in (None, False))
    line = f"{rep.job} [{inputs}]: {rep.verdict}"
    if rep.reason:
        line += f" ({rep.reason})"
    out.write(f"{line}  {rep.ms:.1f} ms\n")
    show = rep.verdict in ("false", "fail") or args.witness
    if show and rep.witness is not None:
        out.write(f"  witness: {describe_witness(rep.witness)}\n")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relkit", description="Equational state theories and relational model checking.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget: bool = True):
        sp.add_argument("files", nargs="+", help="specification files ('-' reads stdin)")
        sp.add_argument("--json", action="store_true", help="one JSON report per line")
        sp.add_argument("--witness", action="store_true", help="print witnesses for every verdict")
        if budget:
            sp.add_argument("--depth", type=int, help="schema instantiation depth")
            sp.add_argument("--max-inst", dest="max_inst", type=int, help="instantiation cap")

    common(sub.add_parser("run", help="run every job in the files"))
    sub.choices["run"].add_argument("--bound", type=int)

    sp = sub.add_parser("entail", help="ground entailment against an interpretation")
    common(sp)
    sp.add_argument("--theory", help="interpretation name")
    sp.add_argument("--state", help="state whose pushout with the interpretation is queried")
    sp.add_argument("--goal", help="sentence to derive")

    sp = sub.add_parser("frame-verify", help="check frame conditions")
    common(sp, budget=False)
    sp.add_argument("--frame")
    sp.add_argument("--conditions")
    sp.add_argument("--axioms-selftest", action="store_true", help="check the relational calculus axioms")

    sp = sub.add_parser("check", help="model-check a formula")
    common(sp)
    sp.add_argument("--logic", choices=LOGIC_NAMES)
    sp.add_argument("--frame")
    sp.add_argument("--at", help="state to evaluate at")
    sp.add_argument("--formula")
    sp.add_argument("--with", dest="interp", help="interpretation name")
    sp.add_argument("--quant", help="quantifier domain name")
    sp.add_argument("--bound", type=int, help="lasso bound for ctlstar (default: size of the frame)")
    sp.add_argument("--deterministic", action="store_true", help="require total functional atomic programs")

    sp = sub.add_parser("morphism", help="check a bounded morphism")
    common(sp)
    sp.add_argument("--map")
    sp.add_argument("--with", dest="interp", help="interpretation name")

    sp = sub.add_parser("fmt", help="print the canonical form")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--check", action="store_true", help="exit 1 if the input is not canonical")
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_ERROR
    try:
        if getattr(args, "bound", None) is not None and args.bound < 1:
            raise UsageError("--bound must be at least 1")
        source = _read(args.files)
        ws = _load(args.files, source)
        if args.command == "fmt":
            text = print_workspace(ws)
            if args.check:
                return 0 if text == source else 1
            out.write(text)
            return 0
        jobs = _jobs_for(args, ws)
    except (UsageError, ParseFailed) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    if not jobs:
        err.write("error: no jobs to run\n")
        return EXIT_ERROR
    ov = _overrides(args)
    code = 0
    for job in jobs:
        try:
            rep = run_job(ws, job, ov)
        except FrameConditionViolated as exc:
            err.write(f"error: {exc}\n")
            code = max(code, EXIT_ERROR)
            continue
        except RelkitError as exc:
            err.write(f"error: {type(exc).__name__}: {exc}\n")
            code = max(code, EXIT_ERROR)
            continue
        _emit(rep, args, out)
        code = max(code, rep.exit_code)
    return code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
