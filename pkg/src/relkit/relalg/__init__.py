"""Finite relation algebra: frames, relational terms and formulas."""

from relkit.relalg.axioms import axioms_selftest, calculus_axioms
from relkit.relalg.frame import (
    Condition,
    ConditionResult,
    FiniteFrame,
    FrameMap,
    FrameReport,
    MACROS,
    eval_formula,
    eval_relterm,
    functional,
    initial,
    total,
    total_program,
    verify_frame_conditions,
)
from relkit.relalg.kernels import BACKEND
from relkit.relalg.morphism import check_bounded_morphism
from relkit.relalg.relation import Relation, closure
from relkit.relalg.terms import *  # noqa: F401,F403
