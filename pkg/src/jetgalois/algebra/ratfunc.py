"""Rational functions: reduced quotients of sparse polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..errors import DenominatorVanishes, DivisionByZero, UnknownSymbol
from .poly import Polynomial, gcd, polynomial_text
from .scalar import AlgebraicNumber, Scalar, scalar_inv


class RationalFunction:
    """``num/den`` with gcd(num, den) = 1 and den having leading coefficient 1.

    Canonical form makes structural equality exact; ``==`` still
    cross-multiplies so that unnormalized inputs compare correctly.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = Polynomial.coerce(num)
        den = Polynomial.constant(1) if den is None else Polynomial.coerce(den)
        if not den.terms:
            raise DivisionByZero("rational function with zero denominator")
        if not reduced:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def symbol(cls, name: str) -> RationalFunction:
        return cls(Polynomial.symbol(name), reduced=True)

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(Polynomial.constant(c), reduced=True)

    @staticmethod
    def coerce(x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(Polynomial.coerce(x), reduced=True)

    # inspection ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self) -> bool:
        return bool(self.num.terms)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.constant_value()

    def variables(self) -> frozenset:
        return self.num.variables() | self.den.variables()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num  # canonical denominator of a polynomial is exactly 1

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> RationalFunction:
        other = RationalFunction.coerce(other)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_constant() and d.is_constant():
            return RationalFunction(a + c, reduced=True)
        if b == d:
            n = a + c
            g = gcd(n, b)
            if g.is_constant():
                return _make(n, b)
            return _make(n.divexact(g), b.divexact(g))
        g = gcd(b, d)
        if g.is_constant():
            return _make(a * d + c * b, b * d)
        b1, d1 = b.divexact(g), d.divexact(g)
        n = a * d1 + c * b1
        den = b1 * d
        g2 = gcd(n, g)
        if not g2.is_constant():
            n, den = n.divexact(g2), den.divexact(g2)
        return _make(n, den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other) -> RationalFunction:
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other) -> RationalFunction:
        return RationalFunction.coerce(other) + (-self)

    def __mul__(self, other) -> RationalFunction:
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return RationalFunction(self.num.scale(other), self.den, reduced=True) if other != 0 else RationalFunction(0)
        if not isinstance(other, (RationalFunction, Polynomial)):
            return NotImplemented
        other = RationalFunction.coerce(other)
        if not self.num.terms or not other.num.terms:
            return RationalFunction(Polynomial(), reduced=True)
        a, b, c, d = self.num, self.den, other.num, other.den
        if b.is_constant() and d.is_constant():
            return RationalFunction(a * c, reduced=True)
        g1 = gcd(a, d)
        g2 = gcd(c, b)
        if not g1.is_constant():
            a, d = a.divexact(g1), d.divexact(g1)
        if not g2.is_constant():
            c, b = c.divexact(g2), b.divexact(g2)
        return _make(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if not self.num.terms:
            raise DivisionByZero("inverse of zero rational function")
        return _make(self.den, self.num)

    def __truediv__(self, other) -> RationalFunction:
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return RationalFunction(self.num.scale(scalar_inv(other)), self.den, reduced=True)
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other) -> RationalFunction:
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> RationalFunction:
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num**n, self.den**n, reduced=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (int, Fraction, AlgebraicNumber, Polynomial)):
                other = RationalFunction.coerce(other)
            else:
                return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # calculus, substitution ----------------------------------------------
    def diff(self, name: str) -> RationalFunction:
        dn = self.num.diff(name)
        if self.den.is_constant():
            return RationalFunction(dn, self.den, reduced=True)
        dd = self.den.diff(name)
        if not dd.terms:
            return RationalFunction(dn, self.den)
        # d(n/q) = (n'q - nq')/q^2; q shares no factor with n so cancel against q only
        top = dn * self.den - self.num * dd
        return RationalFunction(top, self.den * self.den)

    def substitute(self, mapping: Mapping[str, "RationalFunction"]) -> RationalFunction:
        """Simultaneous substitution of rational functions for variables."""
        mapping = {str(k): RationalFunction.coerce(v) for k, v in mapping.items()}
        used = {k: v for k, v in mapping.items() if k in self.variables()}
        if not used:
            return self
        num = _subst_poly(self.num, used)
        den = _subst_poly(self.den, used)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {polynomial_text(self.den)} vanishes under substitution")
        return num / den

    def evaluate(self, point: Mapping[str, Scalar]) -> RationalFunction:
        den = self.den.evaluate(point)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {polynomial_text(self.den)} vanishes at the point")
        return RationalFunction(self.num.evaluate(point), den)

    def value(self, point: Mapping[str, Scalar]) -> Scalar:
        """Scalar value at a point covering every variable."""
        missing = self.variables() - set(point)
        if missing:
            raise UnknownSymbol(f"no value for {sorted(missing)}")
        r = self.evaluate(point)
        return r.constant_value()

    def rename(self, mapping: Mapping[str, str]) -> RationalFunction:
        return RationalFunction(self.num.rename(mapping), self.den.rename(mapping))

    # text ------------------------------------------------------------------
    def __str__(self) -> str:
        return rational_text(self)

    def __repr__(self) -> str:
        return f"RationalFunction({rational_text(self)!r})"


def _normalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if not num.terms:
        return num, Polynomial.constant(1)
    if not den.is_constant():
        g = gcd(num, den)
        if not g.is_constant():
            num, den = num.divexact(g), den.divexact(g)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = scalar_inv(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _make(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Build from coprime parts, fixing only the denominator's leading coefficient."""
    if not den.terms:
        raise DivisionByZero("rational function with zero denominator")
    if not num.terms:
        return RationalFunction(Polynomial(), reduced=True)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = scalar_inv(lc)
        num, den = num.scale(inv), den.scale(inv)
    return RationalFunction(num, den, reduced=True)


def _subst_poly(p: Polynomial, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    # substitute the polynomial parts directly when every image is polynomial
    if all(v.is_polynomial() for v in mapping.values()):
        return RationalFunction(p.compose({k: v.num for k, v in mapping.items()}))
    powers: dict = {}

    def power(n: str, e: int) -> RationalFunction:
        key = (n, e)
        if key not in powers:
            powers[key] = mapping[n] ** e
        return powers[key]

    groups: dict = {}
    for m, c in p.terms.items():
        sub = tuple((n, e) for n, e in m if n in mapping)
        keep = tuple((n, e) for n, e in m if n not in mapping)
        groups.setdefault(sub, {})[keep] = c
    total = RationalFunction(0)
    for sub, rest in groups.items():
        term = RationalFunction(Polynomial(rest, _clean=True), reduced=True)
        for n, e in sub:
            term = term * power(n, e)
        total = total + term
    return total


def _wrap(text: str) -> str:
    return f"({text})"


def rational_text(f: RationalFunction) -> str:
    num = polynomial_text(f.num)
    if f.den.is_constant():
        return num
    den = polynomial_text(f.den)
    if len(f.num.terms) > 1:
        num = _wrap(num)
    if len(f.den.terms) > 1 or len(next(iter(f.den.terms))) > 1:
        den = _wrap(den)
    return f"{num}/{den}"
