"""Three-valued verdicts and their Kleene connectives."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Iterable

BUDGET_EXHAUSTED = "budget-exhausted"
NO_WITNESS = "no-witness"


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    truth: Truth
    reason: str | None = None
    witness: Any = field(default=None, compare=False)

    @property
    def is_true(self) -> bool:
        return self.truth is Truth.TRUE

    @property
    def is_false(self) -> bool:
        return self.truth is Truth.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.truth is Truth.UNKNOWN

    def __bool__(self):
        raise TypeError("a Verdict is three-valued; test .is_true / .is_false explicitly")

    def with_witness(self, witness) -> "Verdict":
        return Verdict(self.truth, self.reason, witness)

    def __str__(self) -> str:
        if self.truth is Truth.UNKNOWN:
            return f"unknown({self.reason})"
        return self.truth.value


TRUE = Verdict(Truth.TRUE)
FALSE = Verdict(Truth.FALSE)


def unknown(reason: str = BUDGET_EXHAUSTED, witness=None) -> Verdict:
    return Verdict(Truth.UNKNOWN, reason, witness)


def of_bool(b: bool) -> Verdict:
    return TRUE if b else FALSE


def neg(v: Verdict) -> Verdict:
    if v.truth is Truth.TRUE:
        return FALSE
    if v.truth is Truth.FALSE:
        return TRUE
    return v


def disj(vs: Iterable[Verdict]) -> Verdict:
    pending = None
    for v in vs:
        if v.truth is Truth.TRUE:
            return v
        if v.truth is Truth.UNKNOWN and pending is None:
            pending = v
    return pending if pending is not None else FALSE


def conj(vs: Iterable[Verdict]) -> Verdict:
    pending = None
    for v in vs:
        if v.truth is Truth.FALSE:
            return v
        if v.truth is Truth.UNKNOWN and pending is None:
            pending = v
    return pending if pending is not None else TRUE
