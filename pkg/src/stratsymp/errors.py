"""Exception hierarchy shared by every module."""


class StratSympError(Exception):
    """Base class for all package errors."""


class UnknownVariable(StratSympError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ParseError(StratSympError, ValueError):
    pass


class NonpositiveBound(StratSympError, ValueError):
    pass


class GuardViolated(StratSympError, ArithmeticError):
    pass


class ChartMismatch(StratSympError, ValueError):
    pass


class DimensionMismatch(StratSympError, ValueError):
    pass


class JacobiViolation(StratSympError, ValueError):
    pass


class NonHomogeneous(StratSympError, ValueError):
    pass


class DegenerateForm(StratSympError, ValueError):
    pass


class DegreeAboveMiddle(StratSympError, ValueError):
    pass


class ChartKindError(StratSympError, ValueError):
    """Operation is only defined on the other chart kind."""


class InvalidPresentation(StratSympError, ValueError):
    pass


class InvalidStratification(StratSympError, ValueError):
    pass


class NoFiberCoordinate(StratSympError, ValueError):
    pass


class CoverGap(StratSympError, ValueError):
    pass


class IdenticalPoints(StratSympError, ValueError):
    pass


class NonFiniteState(StratSympError, FloatingPointError):
    pass


class UnknownModel(StratSympError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ModelFileError(StratSympError, ValueError):
    pass


class NotClosed(StratSympError, ValueError):
    pass
