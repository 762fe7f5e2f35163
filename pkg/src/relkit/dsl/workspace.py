"""Typed result of parsing a specification file."""

from __future__ import annotations

from dataclasses import dataclass, field

from relkit.entail import EntailBudget
from relkit.eqcore import EqSignature, Sentence, SumSignature
from relkit.logics.common import QuantDomain
from relkit.logics.formulas import Formula
from relkit.relalg.frame import Condition, FiniteFrame, FrameMap
from relkit.theoria import InterpretationTheory, StateTheory

LOGIC_NAMES = ("ltl", "ctl", "pdl", "ctlstar")


@dataclass(frozen=True)
class EntailJob:
    interp: str
    goal: Sentence
    state: str | None = None
    depth: int | None = None
    max_inst: int | None = None


@dataclass(frozen=True)
class VerifyJob:
    frame: str
    conditions: str | None = None
    selftest: bool = False


@dataclass(frozen=True)
class CheckJob:
    logic: str
    frame: str
    at: str
    formula: Formula
    interp: str | None = None
    quant: str | None = None
    bound: int | None = None
    depth: int | None = None
    deterministic: bool = False


@dataclass(frozen=True)
class MorphismJob:
    map: str
    interp: str | None = None
    depth: int | None = None


Job = EntailJob | VerifyJob | CheckJob | MorphismJob


@dataclass(frozen=True)
class MapDecl:
    src: str
    dst: str
    fmap: FrameMap

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapDecl):
            return NotImplemented
        return (
            (self.src, self.dst) == (other.src, other.dst)
            and dict(self.fmap.rel_map) == dict(other.fmap.rel_map)
            and dict(self.fmap.h) == dict(other.fmap.h)
        )

    __hash__ = None


@dataclass
class Workspace:
    signatures: dict[str, EqSignature] = field(default_factory=dict)
    interpretations: dict[str, InterpretationTheory] = field(default_factory=dict)
    interp_sig: dict[str, str] = field(default_factory=dict)
    states: dict[str, StateTheory] = field(default_factory=dict)
    state_sigs: dict[str, tuple[str, str]] = field(default_factory=dict)
    frames: dict[str, FiniteFrame] = field(default_factory=dict)
    conditions: dict[str, tuple[Condition, ...]] = field(default_factory=dict)
    maps: dict[str, MapDecl] = field(default_factory=dict)
    quants: dict[str, QuantDomain] = field(default_factory=dict)
    quant_sig: dict[str, str] = field(default_factory=dict)
    budget: EntailBudget | None = None
    jobs: list[Job] = field(default_factory=list)
    # declaration order as (kind, name); jobs use their index as name
    order: list[tuple[str, object]] = field(default_factory=list)

    def default_budget(self) -> EntailBudget:
        return self.budget or EntailBudget()

    def frame_sum(self, frame: str) -> SumSignature:
        f = self.frames[frame]
        return SumSignature(f.rigid_sig, f.flexible_sig)

    def is_empty(self) -> bool:
        return not self.order
