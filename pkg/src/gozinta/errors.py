"""Exception hierarchy shared by every module."""


class GozintaError(ValueError):
    """Base class for all domain errors raised by this package."""


class NonPositiveSide(GozintaError):
    pass


class TooFewSides(GozintaError):
    pass


class DimensionMismatch(GozintaError):
    pass


class NoExpandSide(GozintaError):
    pass


class AmountNotLarger(GozintaError):
    pass


class BoundExceeded(GozintaError):
    pass


class InvalidArrangement(GozintaError):
    pass


class NotMutuallyNestable(GozintaError):
    pass


class AdjacentEqualities(GozintaError):
    pass


class MalformedSystem(GozintaError):
    pass


class MissingVariable(GozintaError):
    pass


class InvalidPermutation(GozintaError):
    pass


class NormalizeUnsupported(GozintaError):
    pass


class InconsistentCase(GozintaError):
    pass


class NotVerified(GozintaError):
    pass


class BudgetExceeded(GozintaError):
    pass


class EngineDisagreement(GozintaError):
    """The pruning kernel and the exact solver disagreed on one case."""


class UnverifiedInput(GozintaError):
    pass


class ElementAbsent(GozintaError):
    pass


class DimensionTooSmall(GozintaError):
    pass


class NonPositiveConstant(GozintaError):
    pass


class NoIsolationGap(GozintaError):
    pass


class ValueOutsideGap(GozintaError):
    pass


class ParseError(GozintaError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class DuplicateLabel(ParseError):
    pass


class UnknownLabel(ParseError):
    pass
