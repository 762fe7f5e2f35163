from __future__ import annotations

from relkit.entail import EntailBudget
from relkit.logics.common import (
    AtomTable,
    LassoPath,
    lasso_labels,
    ltl_conditions,
    require_conditions,
    require_logic,
)
from relkit.logics.formulas import LTL_NODES, Atom, Formula
from relkit.relalg.frame import FiniteFrame
from relkit.theoria import InterpretationTheory
from relkit.verdict import Verdict


def ltl_check(
    i: InterpretationTheory,
    f: FiniteFrame,
    pi: LassoPath,
    phi: Formula,
    b: EntailBudget = EntailBudget(),
    rel: str = "T",
) -> Verdict:
    """Truth of ``phi`` at the first position of the lasso ``pi``.

    The frame must make ``rel`` total and functional (and ``St0`` initial when
    declared), so every state has exactly one infinite path.
    """
    require_logic(phi, LTL_NODES, "LTL")
    require_conditions(f, ltl_conditions(f, rel))
    pi.validate(f, rel)
    atoms = AtomTable(i, f, b)

    def leaf(node: Formula, state: str) -> Verdict:
        assert isinstance(node, Atom)
        return atoms.at(state, node.sentence)

    return lasso_labels(pi, phi, leaf)[phi][0]
