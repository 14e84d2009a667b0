"""Sparse multivariate polynomials over exact scalars.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name, with
every exponent positive; the empty tuple is the constant monomial. Because
monomials carry their own variable names there is no fixed ring: any two
polynomials can be combined and the symbol universe is the union.

Terms are ordered by graded lexicographic order, where variables are
ranked by the lexicographic order of their names ("a" outranks "b").
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from ..errors import DivisionByZero, NotDivisible
from .scalar import ONE, ZERO, AlgebraicNumber, Scalar, scalar_div, scalar_inv, scalar_text

Monomial = tuple  # tuple[tuple[str, int], ...]


def _as_scalar(c) -> Scalar:
    if isinstance(c, (Fraction, AlgebraicNumber)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact scalar")


@lru_cache(maxsize=None)
def _name_key(name: str) -> tuple:
    # reverses string order, prefixes included, so plain tuple comparison gives lex order
    return tuple(-ord(ch) for ch in name) + (1,)


def _canonical_monomial(m: Monomial) -> Monomial:
    if all(e > 0 for _, e in m) and all(m[i][0] < m[i + 1][0] for i in range(len(m) - 1)):
        return m
    d: dict = {}
    for n, e in m:
        d[n] = d.get(n, 0) + e
    return tuple(sorted((n, e) for n, e in d.items() if e))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_key(m: Monomial) -> tuple:
    """Sort key realising graded lex order: larger key means larger monomial."""
    return (monomial_degree(m), tuple((_name_key(n), e) for n, e in m))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        d[n] = d.get(n, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """``a / b`` if ``b`` divides ``a``, else None."""
    if not b:
        return a
    d = dict(a)
    for n, e in b:
        have = d.get(n, 0)
        if have < e:
            return None
        if have == e:
            del d[n]
        else:
            d[n] = have - e
    return tuple(sorted(d.items()))


def mono_gcd(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((n, min(e, db[n])) for n, e in a if n in db)


def monomial_text(m: Monomial) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomials to nonzero scalars."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None, *, _clean: bool = False):
        if terms is None:
            self.terms: dict = {}
        elif _clean:
            self.terms = dict(terms)
        else:
            clean: dict = {}
            for m, c in terms.items():
                m = _canonical_monomial(m)
                clean[m] = clean.get(m, ZERO) + _as_scalar(c)
            self.terms = {m: c for m, c in clean.items() if c != 0}
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> Polynomial:
        c = _as_scalar(c)
        return cls({(): c}, _clean=True) if c != 0 else cls()

    @classmethod
    def symbol(cls, name: str) -> Polynomial:
        return cls({((str(name), 1),): ONE}, _clean=True)

    @classmethod
    def monomial(cls, m: Monomial, c=ONE) -> Polynomial:
        return cls({m: _as_scalar(c)}) if c != 0 else cls()

    @staticmethod
    def coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> Scalar:
        return self.terms.get((), ZERO)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> frozenset:
        return frozenset(n for m in self.terms for n, _ in m)

    def total_degree(self) -> int:
        return max((monomial_degree(m) for m in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        best = -1 if not self.terms else 0
        for m in self.terms:
            for n, e in m:
                if n == name and e > best:
                    best = e
        return best

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(), key=lambda t: monomial_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Monomial, Scalar]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=monomial_key)
        return m, self.terms[m]

    def leading_coefficient(self) -> Scalar:
        return self.leading_term()[1]

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        return self.scale(scalar_inv(lc))

    def is_rational(self) -> bool:
        return all(not isinstance(c, AlgebraicNumber) for c in self.terms.values())

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> Polynomial:
        other = Polynomial.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial(out, _clean=True)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial({m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other) -> Polynomial:
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return Polynomial.coerce(other) + (-self)

    def scale(self, c) -> Polynomial:
        c = _as_scalar(c)
        if c == 0:
            return Polynomial()
        if c == 1:
            return self
        return Polynomial({m: v * c for m, v in self.terms.items()}, _clean=True)

    def mul_monomial(self, mono: Monomial, c=ONE) -> Polynomial:
        return Polynomial({mono_mul(m, mono): v * c for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Polynomial()
        a, b = (self, other) if len(self.terms) <= len(other.terms) else (other, self)
        out: dict = {}
        for ma, ca in a.terms.items():
            for mb, cb in b.terms.items():
                m = mono_mul(ma, mb)
                v = out.get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Polynomial({m: c for m, c in out.items() if c != 0}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a non-negative integer")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, AlgebraicNumber)):
            return self.terms == Polynomial.constant(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # calculus and substitution ---------------------------------------
    def diff(self, name: str) -> Polynomial:
        out: dict = {}
        for m, c in self.terms.items():
            for i, (n, e) in enumerate(m):
                if n == name:
                    nm = m[:i] + ((n, e - 1),) + m[i + 1 :] if e > 1 else m[:i] + m[i + 1 :]
                    out[nm] = c * e
                    break
        return Polynomial(out, _clean=True)

    def evaluate(self, point: Mapping[str, Scalar]) -> Polynomial:
        """Substitute scalar values for some variables."""
        out = Polynomial()
        acc: dict = {}
        for m, c in self.terms.items():
            coeff = c
            rest = []
            for n, e in m:
                if n in point:
                    coeff = coeff * _as_scalar(point[n]) ** e
                else:
                    rest.append((n, e))
            if coeff != 0:
                key = tuple(rest)
                acc[key] = acc.get(key, ZERO) + coeff
        out = Polynomial({m: c for m, c in acc.items() if c != 0}, _clean=True)
        return out

    def compose(self, mapping: Mapping[str, Polynomial]) -> Polynomial:
        """Simultaneous polynomial substitution of variables."""
        if not mapping:
            return self
        cache: dict = {}

        def power(n: str, e: int) -> Polynomial:
            key = (n, e)
            if key not in cache:
                cache[key] = mapping[n] ** e
            return cache[key]

        result = Polynomial()
        for m, c in self.terms.items():
            keep = []
            term = None
            for n, e in m:
                if n in mapping:
                    p = power(n, e)
                    term = p if term is None else term * p
                else:
                    keep.append((n, e))
            base = Polynomial({tuple(keep): c}, _clean=True)
            result = result + (base if term is None else base * term)
        return result

    def rename(self, mapping: Mapping[str, str]) -> Polynomial:
        out: dict = {}
        for m, c in self.terms.items():
            d: dict = {}
            for n, e in m:
                n2 = mapping.get(n, n)
                d[n2] = d.get(n2, 0) + e
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, ZERO) + c
        return Polynomial({m: c for m, c in out.items() if c != 0}, _clean=True)

    def coefficients_in(self, names: Iterable[str]) -> dict[Monomial, Polynomial]:
        """Split into ``{monomial in names: coefficient polynomial in the rest}``."""
        names = set(names)
        groups: dict = {}
        for m, c in self.terms.items():
            inner = tuple(p for p in m if p[0] in names)
            outer = tuple(p for p in m if p[0] not in names)
            groups.setdefault(inner, {})[outer] = c
        return {k: Polynomial(v, _clean=True) for k, v in groups.items()}

    def univariate(self, name: str) -> dict[int, Polynomial]:
        """Coefficients with respect to one variable, keyed by exponent."""
        groups: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for i, (n, k) in enumerate(m):
                if n == name:
                    e = k
                    rest = m[:i] + m[i + 1 :]
                    break
            groups.setdefault(e, {})[rest] = c
        return {k: Polynomial(v, _clean=True) for k, v in groups.items()}

    @staticmethod
    def from_univariate(coeffs: Mapping[int, Polynomial], name: str) -> Polynomial:
        out = Polynomial()
        for e, c in coeffs.items():
            out = out + (c.mul_monomial(((name, e),)) if e else c)
        return out

    def content_monomial(self) -> Monomial:
        it = iter(self.terms)
        g = next(it, ())
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    # division -------------------------------------------------------------
    def divexact(self, other: Polynomial) -> Polynomial:
        q, r = self.divmod_lead(other)
        if r:
            raise NotDivisible(f"{other} does not divide {self}")
        return q

    def divmod_lead(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Divide by leading terms until the leading term stops being divisible.

        The remainder is zero exactly when ``other`` divides ``self``.
        """
        other = Polynomial.coerce(other)
        if not other.terms:
            raise DivisionByZero("polynomial division by zero")
        if other.is_constant():
            return self.scale(scalar_inv(other.constant_value())), Polynomial()
        lm, lc = other.leading_term()
        lc_inv = scalar_inv(lc)
        rem = dict(self.terms)
        quo: dict = {}
        other_items = list(other.terms.items())
        while rem:
            m = max(rem, key=monomial_key)
            qm = mono_div(m, lm)
            if qm is None:
                break
            qc = rem[m] * lc_inv
            quo[qm] = qc
            for om, oc in other_items:
                pm = mono_mul(om, qm)
                v = rem.get(pm, ZERO) - oc * qc
                if v == 0:
                    rem.pop(pm, None)
                else:
                    rem[pm] = v
        return Polynomial(quo, _clean=True), Polynomial(rem, _clean=True)

    def divides(self, other: Polynomial) -> bool:
        return not other.divmod_lead(self)[1]

    # text --------------------------------------------------------------
    def __str__(self) -> str:
        return polynomial_text(self)

    def __repr__(self) -> str:
        return f"Polynomial({polynomial_text(self)!r})"


def _coeff_atom(c: Scalar) -> tuple[bool, str]:
    """(negative?, text of |c|) for a term coefficient."""
    if isinstance(c, AlgebraicNumber):
        return False, f"({scalar_text(c)})"
    neg = c < 0
    return neg, scalar_text(abs(c))


def polynomial_text(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts: list[str] = []
    for m, c in p.sorted_terms():
        neg, ctext = _coeff_atom(c)
        mtext = monomial_text(m)
        if not mtext:
            body = ctext
        elif ctext == "1":
            body = mtext
        else:
            body = f"{ctext}*{mtext}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def iter_monomials(names: list[str], max_degree: int) -> Iterator[Monomial]:
    """All monomials in ``names`` of total degree <= max_degree (graded, deterministic)."""
    names = sorted(names)

    def rec(i: int, left: int) -> Iterator[list]:
        if i == len(names):
            yield []
            return
        for e in range(left, -1, -1):
            for rest in rec(i + 1, left - e):
                yield ([(names[i], e)] if e else []) + rest

    for d in range(max_degree + 1):
        for m in rec(0, d):
            if sum(e for _, e in m) == d:
                yield tuple(m)


# gcd -------------------------------------------------------------------------


def _primitive(p: Polynomial, x: str) -> tuple[Polynomial, Polynomial]:
    """(content, primitive part) of p viewed in K[rest][x]."""
    coeffs = list(p.univariate(x).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        if cont.is_constant():
            break
        cont = gcd(cont, c)
    cont = cont.monic() if not cont.is_constant() else Polynomial.constant(1)
    if cont.is_constant():
        return cont, p
    return cont, p.divexact(cont)


def _prem(a: dict, b: dict) -> dict:
    """Pseudo-remainder of univariate polynomials with Polynomial coefficients."""
    db = max(b)
    lcb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lcr = r[dr]
        shift = dr - db
        new: dict = {}
        for e, c in r.items():
            if e != dr:
                new[e] = c * lcb
        for e, c in b.items():
            if e == db:
                continue
            k = e + shift
            v = new.get(k, Polynomial()) - c * lcr
            new[k] = v
        r = {e: c for e, c in new.items() if c}
    return r


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (leading coefficient 1 in term order)."""
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(1)
    if a == b:
        return a.monic()
    mono = mono_gcd(a.content_monomial(), b.content_monomial())
    if a.is_monomial() or b.is_monomial():
        return Polynomial.monomial(mono)
    if mono:
        a = a.divexact(Polynomial.monomial(mono))
        b = b.divexact(Polynomial.monomial(mono))
    if a.is_rational() and b.is_rational():
        g = _gcd_rational(a, b)
    else:
        g = _gcd_nomono(a, b)
    return g.mul_monomial(mono) if mono else g


def _gcd_nomono(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(1)
    va, vb = a.variables(), b.variables()
    # a variable present on one side only: the gcd divides every coefficient in it
    only = (va - vb) or (vb - va)
    if only:
        x = min(only)
        src, other = (a, b) if x in va else (b, a)
        g = other
        for c in sorted(src.univariate(x).values(), key=lambda p: len(p.terms)):
            g = gcd(g, c)
            if g.is_constant():
                return Polynomial.constant(1)
        return g.monic()
    if len(a.terms) <= len(b.terms):
        if a.divides(b):
            return a.monic()
    if b.divides(a):
        return b.monic()
    if len(a.terms) > len(b.terms) and a.divides(b):
        return a.monic()
    common = va & vb
    x = min(common, key=lambda n: (max(a.degree_in(n), b.degree_in(n)), n))
    ca, pa = _primitive(a, x)
    cb, pb = _primitive(b, x)
    cg = gcd(ca, cb)
    u, v = pa.univariate(x), pb.univariate(x)
    if max(u) < max(v):
        u, v = v, u
    while True:
        r = _prem(u, v)
        if not r:
            break
        if max(r) == 0:
            return cg.monic()
        rp = Polynomial.from_univariate(r, x)
        _, rp = _primitive(rp, x)
        u, v = v, rp.univariate(x)
    g = Polynomial.from_univariate(v, x)
    _, g = _primitive(g, x)
    return (g * cg).monic()


@lru_cache(maxsize=256)
def _sympy_ring(names: tuple):
    from sympy.polys.domains import QQ
    from sympy.polys.rings import ring

    return ring(",".join(f"v{i}" for i in range(len(names))), QQ)[0]


def _gcd_rational(a: Polynomial, b: Polynomial) -> Polynomial:
    """gcd over Q, delegated to sympy's sparse heuristic gcd."""
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(1)
    names = tuple(sorted(a.variables() | b.variables()))
    index = {n: i for i, n in enumerate(names)}
    R = _sympy_ring(names)
    dom = R.domain

    def to_ring(p: Polynomial):
        data = {}
        for m, c in p.terms.items():
            exps = [0] * len(names)
            for n, e in m:
                exps[index[n]] = e
            data[tuple(exps)] = dom(c.numerator, c.denominator)
        return R.from_dict(data)

    g = to_ring(a).gcd(to_ring(b))
    out = {}
    for exps, c in g.terms():
        m = tuple((names[i], e) for i, e in enumerate(exps) if e)
        out[m] = Fraction(int(dom.numer(c)), int(dom.denom(c)))
    return Polynomial(out, _clean=True).monic()


def lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant():
        return b.monic()
    if b.is_constant():
        return a.monic()
    return (a * b.divexact(gcd(a, b))).monic()


def symbols(*names: str) -> tuple[Polynomial, ...]:
    return tuple(Polynomial.symbol(n) for n in names)


def const(c) -> Polynomial:
    return Polynomial.constant(c)


def poly_scalar_div(p: Polynomial, c: Scalar) -> Polynomial:
    return p.scale(scalar_div(ONE, c))
