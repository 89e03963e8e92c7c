"""Exception hierarchy.

Two roots matter to callers: :class:`PreconditionError` for inputs that
violate an operation's contract (the CLI maps these to exit status 2) and
:class:`NumericalError` for estimator failures (exit status 1).
"""


class PdfRelError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(PdfRelError, ValueError):
    """Input does not satisfy the operation's preconditions."""


class NumericalError(PdfRelError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""


class MalformedSpec(PreconditionError):
    pass


class UnknownFamily(PreconditionError):
    pass


class ParamOutOfRange(PreconditionError):
    pass


class POutOfRange(PreconditionError):
    pass


class XOutOfSupport(PreconditionError):
    pass


class TOutOfSupport(PreconditionError):
    pass


class YNotAttained(PreconditionError):
    pass


class YOutOfRange(PreconditionError):
    pass


class NotUnimodal(PreconditionError):
    pass


class NotMonotone(PreconditionError):
    pass


class NotSymmetricUnimodal(PreconditionError):
    pass


class DegenerateLaw(PreconditionError):
    pass


class CaseUnsupported(PreconditionError):
    pass


class AtBranchBoundary(PreconditionError):
    pass


class FlatZone(PreconditionError):
    pass


class BadUVOrder(PreconditionError):
    pass


class UnknownTheorem(PreconditionError):
    pass


class PreconditionViolated(PreconditionError):
    def __init__(self, message, precondition=None):
        super().__init__(message)
        self.precondition = precondition


class IntegralDiverged(NumericalError):
    pass
