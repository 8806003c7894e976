"""Exception types shared across the library."""


class DescoordError(Exception):
    """Base class for all library errors."""


class EventTableMismatch(DescoordError):
    """Two generators that must share an event table do not."""


class PreconditionFailed(DescoordError):
    """A documented precondition of an operation does not hold.

    Carries the name of the failed hypothesis and, when available, a
    witness demonstrating the failure.
    """

    def __init__(self, condition, witness=None, message=""):
        self.condition = condition
        self.witness = witness
        super().__init__(message or f"precondition failed: {condition}")


class SpecNotInPlant(PreconditionFailed):
    """The specification language is not contained in the plant's marked language."""

    def __init__(self, witness=None):
        super().__init__("spec-within-plant", witness,
                         "specification is not contained in the plant's marked language")


class ConditionFailed(DescoordError):
    """A named synthesis condition failed; supervisors cannot be emitted."""

    def __init__(self, condition, witness=None):
        self.condition = condition
        self.witness = witness
        super().__init__(f"condition failed: {condition}")


class ObserverPreconditionFailed(PreconditionFailed):
    """A required observer property does not hold."""

    def __init__(self, which, witness=None):
        super().__init__(f"observer:{which}", witness,
                         f"projection is not an observer for {which}")


class InstanceTooLarge(DescoordError):
    """A brute-force oracle was handed an instance beyond its contract."""


class NotAcyclic(DescoordError):
    """An oracle restricted to acyclic generators received a cyclic one."""
