"""Exception hierarchy shared by every stage of the pipeline."""


class RtileError(Exception):
    """Base class for all errors raised by this package."""


# formula
class DimacsSyntaxError(RtileError):
    pass


class ClauseArity(RtileError):
    pass


class DuplicateVariable(RtileError):
    pass


class IndexOutOfRange(RtileError):
    pass


class TooLarge(RtileError):
    pass


class GenerationFailed(RtileError):
    pass


# layout
class NotPlanar(RtileError):
    pass


class RoutingFailed(RtileError):
    pass


# gadgetry
class FootprintTooLarge(RtileError):
    pass


class NoPorts(RtileError):
    pass


class StraightRunUnavailable(RtileError):
    pass


class ParityUnresolvable(RtileError):
    pass


class TooLong(RtileError):
    pass


class InvalidFill(RtileError):
    pass


# reduction
class ParityViolation(RtileError):
    pass


class UnsatisfiedClause(RtileError):
    def __init__(self, clause_index, message=None):
        self.clause_index = clause_index
        super().__init__(message or f"clause {clause_index} has no true literal")


class InvalidTiling(RtileError):
    pass


class BudgetExceeded(RtileError):
    pass


class InconsistentModes(RtileError):
    pass


# solver
class OutOfBounds(RtileError):
    pass


class ScaleExceeded(RtileError):
    pass


class InfeasibleBudget(RtileError):
    pass


class PreconditionViolated(RtileError):
    pass
