"""Exception types raised by the library."""


class DSLogicError(ValueError):
    """Base class for domain errors (bad inputs, undefined quantities)."""


class FrameError(DSLogicError):
    pass


class FrameMismatchError(DSLogicError):
    """Operands were built on different frames of discernment."""


class MassError(DSLogicError):
    pass


class TotalConflictError(DSLogicError):
    """The orthogonal sum is undefined because the conflict K equals 1."""


class ZeroProbabilityError(DSLogicError):
    """Conditioning on an event of probability zero."""


class InfeasibleError(DSLogicError):
    """No probability assignment satisfies the requested constraints."""


class NonlinearConstraintError(DSLogicError):
    pass


class ConditionViolationError(DSLogicError):
    """An assignment that should satisfy conditions (i)-(iv) does not."""
