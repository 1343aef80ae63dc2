"""Exception hierarchy shared by all livatom modules."""


class LIVError(Exception):
    """Base class for every error raised by livatom."""


class IndexOutOfRange(LIVError, IndexError):
    pass


class SymmetryConflict(LIVError, ValueError):
    pass


class MagnitudeTooLarge(LIVError, ValueError):
    pass


class CoincidentPoints(LIVError, ValueError):
    pass


class InvalidQuantumNumbers(LIVError, ValueError):
    pass


class DivergentExpectation(LIVError, ValueError):
    pass


class QuadratureNotConverged(LIVError, ArithmeticError):
    pass


class DiagonalizationFailure(LIVError, ArithmeticError):
    pass


class MonteCarloNotConverged(LIVError, ArithmeticError):
    pass


class ZeroSlope(LIVError, ValueError):
    """The requested system has no first-order sensitivity to the coefficient."""
