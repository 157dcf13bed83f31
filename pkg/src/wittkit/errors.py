"""Exception types shared across the package."""


class WittkitError(Exception):
    """Base class for every error raised by wittkit."""


class ParamsMismatch(WittkitError):
    pass


class DivisionByZero(WittkitError, ZeroDivisionError):
    pass


class Inconsistent(WittkitError):
    """A linear system has no solution."""


class UnsupportedField(WittkitError):
    pass


class OverflowGuard(WittkitError):
    pass


class NotAUnit(WittkitError):
    pass


class DomainError(WittkitError):
    pass


class PrecisionError(WittkitError):
    pass


class TruncationTooShort(WittkitError):
    pass


class NotABasis(WittkitError):
    pass


class SizeGuard(WittkitError):
    pass


class HypothesisViolated(WittkitError):
    pass


class RankDeficit(WittkitError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class TypeInvalid(WittkitError):
    pass


class NotNilpotent(WittkitError):
    pass


class NotTransversal(WittkitError):
    pass


class Singular(WittkitError):
    pass


class UnsupportedP(WittkitError):
    pass


class NotInParabolic(WittkitError):
    pass


class BlockSingular(WittkitError):
    pass
