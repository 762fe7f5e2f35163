"""Model checkers for LTL, CTL, first-order dynamic logic and first-order CTL*."""

from relkit.logics.common import (
    AtomTable,
    LassoPath,
    QuantDomain,
    lasso_labels,
    ltl_conditions,
    path_from,
    rho_translate,
    x_variants,
)
from relkit.logics.ctl import ctl_check, ctl_labels, ctl_witness
from relkit.logics.foctlstar import completeness_threshold, foctlstar_check, is_state_formula
from relkit.logics.fodl import FodlModel, deterministic_conditions, fodl_check, program_to_relterm
from relkit.logics.formulas import *  # noqa: F401,F403
from relkit.logics.ltl import ltl_check

__all__ = [
    "AtomTable",
    "LassoPath",
    "QuantDomain",
    "lasso_labels",
    "ltl_conditions",
    "path_from",
    "rho_translate",
    "x_variants",
    "ctl_check",
    "ctl_labels",
    "ctl_witness",
    "completeness_threshold",
    "foctlstar_check",
    "is_state_formula",
    "FodlModel",
    "deterministic_conditions",
    "fodl_check",
    "program_to_relterm",
    "ltl_check",
]
