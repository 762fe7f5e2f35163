"""Exception hierarchy shared by every relkit module."""


class RelkitError(Exception):
    """Base class for all errors raised by relkit."""


# equational layer
class UnknownSymbol(RelkitError):
    pass


class ArityMismatch(RelkitError):
    pass


class SymbolNotInSource(RelkitError):
    pass


class SignatureMismatch(RelkitError):
    pass


class InvalidSignature(RelkitError):
    pass


# entailment
class BudgetZeroWithSchemas(RelkitError):
    pass


class IllFormedGoal(RelkitError):
    pass


# interpretations and states
class FlexibleSymbolInInterpretation(RelkitError):
    pass


class NonRigidRightHandSide(RelkitError):
    pass


class UnknownFlexibleSymbol(RelkitError):
    pass


# relations and frames
class UnknownRelationSymbol(RelkitError):
    pass


class UnboundPointVariable(RelkitError):
    pass


class UnmappedSymbol(RelkitError):
    pass


class InvalidFrame(RelkitError):
    pass


# model checking
class NotAStateFormula(RelkitError):
    pass


class InvalidPath(RelkitError):
    pass


class FrameConditionViolated(RelkitError):
    def __init__(self, condition: str, witness=None):
        self.condition = condition
        self.witness = witness
        msg = f"frame condition violated: {condition}"
        if witness is not None:
            msg += f" (witness {witness})"
        super().__init__(msg)


class EmptyQuantDomain(RelkitError):
    pass


class UnsupportedOperator(RelkitError):
    """A formula uses a connective outside the chosen logic."""
