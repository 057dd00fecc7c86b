"""Exception hierarchy shared by every module."""


class PsdError(Exception):
    """Base class for all errors raised by psdsynth."""


# series kernel

class DivisionByNonUnit(PsdError, ZeroDivisionError):
    pass


class NonzeroConstantTerm(PsdError, ValueError):
    pass


class ConstantTermNotOne(PsdError, ValueError):
    pass


class NonzeroInnerConstant(PsdError, ValueError):
    pass


class NotInvertible(PsdError, ValueError):
    pass


class OrderExceeded(PsdError, IndexError):
    pass


# covariance input

class ParseError(PsdError, ValueError):
    """Expression could not be parsed; carries 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ZeroDenominator(PsdError, ZeroDivisionError):
    pass


class NotNormalForm(PsdError, ValueError):
    """V is not of the form x*(1 + ...) at the origin."""


class NonIntegralLinearTerm(NotNormalForm):
    """V(0) = 0 but V'(0) is not a positive integer.

    The linear coefficient of a PSD covariance equals the smallest positive
    exponent carried by omega, so such a V can never be a covariance.
    """


class NotRevertible(PsdError, ValueError):
    pass


# synthesis

class TauVanishesAtZero(PsdError, ValueError):
    pass


class RecurrenceSingular(PsdError, ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"recurrence leading coefficient vanishes at index {index}")
        self.index = index


class DomainError(PsdError, ValueError):
    pass


# transforms

class UnrepresentableComposition(PsdError, ValueError):
    pass


class ShiftUnderflow(PsdError, ValueError):
    pass


# distribution

class TailTooHeavy(PsdError, ValueError):
    def __init__(self, deficit: float, tolerance: float):
        super().__init__(f"tail mass {deficit:.3e} exceeds tolerance {tolerance:.1e}")
        self.deficit = deficit
        self.tolerance = tolerance


# fixtures

class FixtureCorrupt(PsdError, ValueError):
    pass
