"""Exact scalars: rationals, optionally extended by one algebraic generator.

Rationals are plain :class:`fractions.Fraction` values. An element of
``Q[rho]/(p(rho))`` is an :class:`AlgebraicNumber`; elements whose only
nonzero coefficient is the constant one are collapsed back to ``Fraction``
so that every scalar has exactly one representation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from ..errors import DivisionByZero, ExtensionMismatch, ZeroDivisor

Scalar = Union[Fraction, "AlgebraicNumber"]

ZERO = Fraction(0)
ONE = Fraction(1)


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _pmul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(a)
    _trim(rem)
    if len(rem) < len(b):
        return [], rem
    quo = [ZERO] * (len(rem) - len(b) + 1)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        c = rem[-1] / lead
        quo[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] -= c * y
        rem.pop()
        _trim(rem)
    return _trim(quo), rem


class Extension:
    """The quotient ring ``Q[name]/(p)`` for a monic defining polynomial ``p``.

    ``modulus`` lists the coefficients of ``p`` from the constant term up.
    Irreducibility is not checked; a failed inversion raises ZeroDivisor.
    """

    def __init__(self, name: str, modulus: Sequence[int | Fraction]):
        coeffs = [Fraction(c) for c in modulus]
        _trim(coeffs)
        if len(coeffs) < 2:
            raise ValueError("defining polynomial must have positive degree")
        if coeffs[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        self.name = name
        self.modulus = tuple(coeffs)
        self.degree = len(coeffs) - 1

    def __repr__(self) -> str:
        return f"Extension({self.name!r}, {list(map(str, self.modulus))})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Extension) and (self.name, self.modulus) == (other.name, other.modulus)

    def __hash__(self) -> int:
        return hash((self.name, self.modulus))

    def reduce(self, coeffs: Sequence[Fraction]) -> list[Fraction]:
        coeffs = _trim(list(coeffs))
        if len(coeffs) <= self.degree:
            return coeffs
        return _pdivmod(coeffs, self.modulus)[1]

    def element(self, coeffs: Sequence[int | Fraction]) -> Scalar:
        return make_algebraic(self, [Fraction(c) for c in coeffs])

    @property
    def generator(self) -> Scalar:
        return self.element([0, 1])

    def defining_polynomial_text(self) -> str:
        terms = []
        for i in range(self.degree - 1, -1, -1):
            c = self.modulus[i]
            if c:
                terms.append((i, -c))
        rhs = " + ".join(
            (f"{c}*{self.name}^{i}" if i > 1 else f"{c}*{self.name}" if i == 1 else f"{c}") for i, c in terms
        )
        return f"{self.name}^{self.degree} = {rhs or '0'}"


def make_algebraic(ext: Extension, coeffs: Sequence[Fraction]) -> Scalar:
    red = ext.reduce(coeffs)
    if len(red) <= 1:
        return red[0] if red else ZERO
    return AlgebraicNumber(ext, tuple(red))


class AlgebraicNumber:
    """Element of ``Q[rho]/(p)`` that is not a rational number."""

    __slots__ = ("ext", "coeffs", "_hash")

    def __init__(self, ext: Extension, coeffs: tuple[Fraction, ...]):
        self.ext = ext
        self.coeffs = coeffs
        self._hash = hash((ext.name, coeffs))

    def _coerce(self, other) -> tuple[Fraction, ...] | None:
        if isinstance(other, AlgebraicNumber):
            if other.ext != self.ext:
                raise ExtensionMismatch("only one algebraic extension may be active")
            return other.coeffs
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(o), len(self.coeffs))
        out = [ZERO] * n
        for i, c in enumerate(self.coeffs):
            out[i] += c
        for i, c in enumerate(o):
            out[i] += c
        return make_algebraic(self.ext, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.ext, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return make_algebraic(self.ext, _pmul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        # extended Euclid on (self, p) in Q[t]
        r0, r1 = list(self.ext.modulus), list(self.coeffs)
        s0, s1 = [], [ONE]
        while r1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            qs = _pmul(q, s1)
            n = max(len(s0), len(qs))
            s_new = [(s0[i] if i < len(s0) else ZERO) - (qs[i] if i < len(qs) else ZERO) for i in range(n)]
            s0, s1 = s1, _trim(s_new)
        if len(r0) != 1:
            raise ZeroDivisor(f"{self} is not invertible modulo {self.ext.defining_polynomial_text()}")
        inv = [c / r0[0] for c in s0]
        return make_algebraic(self.ext, inv)

    def __truediv__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero scalar")
            return AlgebraicNumber(self.ext, tuple(c / other for c in self.coeffs))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result: Scalar = ONE
        base: Scalar = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgebraicNumber):
            return self.ext == other.ext and self.coeffs == other.coeffs
        return False  # canonical: a rational value is never an AlgebraicNumber

    def __hash__(self) -> int:
        return self._hash

    def __bool__(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"AlgebraicNumber({scalar_text(self)})"

    def __str__(self) -> str:
        return scalar_text(self)


def scalar_div(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(b, AlgebraicNumber):
        return a * b.inverse()
    if b == 0:
        raise DivisionByZero("division by zero scalar")
    return a / b


def scalar_inv(a: Scalar) -> Scalar:
    return scalar_div(ONE, a)


def is_rational(a: Scalar) -> bool:
    return not isinstance(a, AlgebraicNumber)


def fraction_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def scalar_text(a: Scalar) -> str:
    """Render a scalar in the expression grammar (descending powers of the generator)."""
    if not isinstance(a, AlgebraicNumber):
        return fraction_text(Fraction(a))
    name = a.ext.name
    parts: list[str] = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if not c:
            continue
        if i == 0:
            body = fraction_text(abs(c))
        else:
            atom = name if i == 1 else f"{name}^{i}"
            body = atom if abs(c) == 1 else f"{fraction_text(abs(c))}*{atom}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
