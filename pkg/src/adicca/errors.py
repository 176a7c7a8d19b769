"""Exception hierarchy.

Every failure raised by the library derives from :class:`AdicError`, so the
CLI can map them all to exit status 1 with a one-line diagnostic.
"""


class AdicError(Exception):
    """Base class for all library errors."""


# diagram structure
class LevelMismatch(AdicError):
    pass


class EmptySchedule(AdicError):
    pass


class ZeroClockEdges(AdicError):
    pass


class CutsNotMonotone(AdicError):
    pass


class CutsBreakPeriodicity(AdicError):
    pass


class LabelOutOfRange(AdicError):
    pass


class MaxTailUndefined(AdicError):
    pass


class MinTailUndefined(AdicError):
    pass


class BadLevels(AdicError):
    pass


# adic dynamics
class NotFocused(AdicError):
    pass


class NotProperlyOrdered(AdicError):
    pass


class ExtensionBoundExceeded(AdicError):
    pass


class InconsistentPath(AdicError):
    pass


# builders
class NotProper(AdicError):
    pass


class NotPrimitive(AdicError):
    pass


class EmptyQuotients(AdicError):
    pass


class DigitOutOfRange(AdicError):
    pass


class IncompleteFill(AdicError):
    pass


class WidthBoundViolated(AdicError):
    pass


class UnstabilizedWords(AdicError):
    pass


class NotToeplitz(AdicError):
    """The filling procedure produced a sequence with no Toeplitz structure."""


# spacetime / synthesis
class WidthExceedsTailKnowledge(AdicError):
    pass


class InsufficientCoverage(AdicError):
    pass


class AmbiguousRule(AdicError):
    def __init__(self, message, counterexamples=()):
        super().__init__(message)
        self.counterexamples = list(counterexamples)


class InsufficientHarvest(AdicError):
    pass


class UnseenContext(AdicError):
    def __init__(self, message, context=None, cell=None):
        super().__init__(message)
        self.context = context
        self.cell = cell


class DeductionStuck(AdicError):
    pass


class DepthExceedsCore(AdicError):
    pass


class Mismatch(AdicError):
    pass


# io
class ParseError(AdicError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position
