"""Exception types raised across the package."""


class CompUnionError(Exception):
    """Base class for all errors raised by this package."""


class CycleDetected(CompUnionError):
    pass


class MismatchedVertexCount(CompUnionError):
    pass


class EmptyInput(CompUnionError):
    pass


class TooSmall(CompUnionError):
    pass


class IndexOutOfRange(CompUnionError):
    pass


class InfeasibleDegree(CompUnionError):
    pass


class RejectionLimitExceeded(CompUnionError):
    pass


class BudgetZero(CompUnionError):
    pass


class ExactLimitExceeded(CompUnionError):
    pass


class NonExactCertificate(CompUnionError):
    pass


class DimensionMismatch(CompUnionError):
    pass


class SizeMismatch(CompUnionError):
    pass


class ZeroNormal(CompUnionError):
    pass


class LimitExceeded(CompUnionError):
    pass
