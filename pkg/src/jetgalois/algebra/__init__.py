"""Exact scalar, polynomial, rational-function and matrix substrate."""

from .matrix import Matrix, det_and_inverse, nullspace, rank, rref
from .poly import Polynomial, gcd, iter_monomials, lcm
from .ratfunc import RationalFunction
from .scalar import AlgebraicNumber, Extension, Scalar, scalar_text
from .symbol import Symbol, SymbolKind

__all__ = [
    "AlgebraicNumber",
    "Extension",
    "Matrix",
    "Polynomial",
    "RationalFunction",
    "Scalar",
    "Symbol",
    "SymbolKind",
    "det_and_inverse",
    "gcd",
    "iter_monomials",
    "lcm",
    "nullspace",
    "rank",
    "rref",
    "scalar_text",
]


def var(name: str) -> RationalFunction:
    """Shorthand for the rational function consisting of one variable."""
    return RationalFunction.symbol(name)


def vars_(*names: str) -> tuple[RationalFunction, ...]:
    return tuple(RationalFunction.symbol(n) for n in names)
