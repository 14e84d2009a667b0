"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class JetGaloisError(Exception):
    """Base class for all errors raised by jetgalois."""


class AlgebraError(JetGaloisError, ArithmeticError):
    pass


class DivisionByZero(AlgebraError, ZeroDivisionError):
    pass


class NotDivisible(AlgebraError):
    pass


class ZeroDivisor(AlgebraError):
    """Inversion hit a non-unit of a reducible quotient ring."""


class ExtensionMismatch(AlgebraError):
    pass


class DenominatorVanishes(AlgebraError):
    pass


class Singular(AlgebraError):
    pass


class UnknownSymbol(JetGaloisError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ChartMismatch(JetGaloisError, ValueError):
    pass


class DegreeOverflow(JetGaloisError, ValueError):
    pass


class DegreeMismatch(JetGaloisError, ValueError):
    pass


class ZeroForm(JetGaloisError, ValueError):
    pass


class SingularJacobian(Singular):
    pass


class RankOutOfRange(JetGaloisError, ValueError):
    pass


class NoValidPoint(JetGaloisError, RuntimeError):
    pass


class NoPolynomialFit(JetGaloisError, ValueError):
    pass


class NonIntegerCoefficients(JetGaloisError, ValueError):
    pass


class ZeroDenominator(JetGaloisError, ValueError):
    pass


class SliceNotInvariant(JetGaloisError, ValueError):
    pass


class ArityMismatch(JetGaloisError, ValueError):
    pass


class NoSolution(JetGaloisError, ValueError):
    pass


class PoleAtZero(JetGaloisError, ValueError):
    pass


class ParseError(JetGaloisError, SyntaxError):
    """Raised by the expression parser; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"{line}:{column}: {message}" + (f" (at {token!r})" if token else ""))

    def __str__(self) -> str:
        return self.args[0]
