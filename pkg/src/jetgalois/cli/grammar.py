"""Surface syntax for functions, vector fields and forms.

    expr    := wedge
    wedge   := sum ('/\\' sum)*
    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INTEGER)*      (right associative)
    atom    := INTEGER | IDENT | IDENT '[' INT (',' INT)* ']'
             | 'd(' IDENT ')' | 'D(' IDENT ')' | '(' expr ')'

``d(y)`` is the differential of a fiber coordinate and ``D(y)`` the
coordinate vector field ``d/dy``. Juxtaposition never multiplies, so a
parameter called ``d`` stays usable as long as it is not directly
followed by ``(``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..algebra import Extension, Polynomial, RationalFunction
from ..errors import DegreeOverflow, DivisionByZero, ParseError, UnknownSymbol
from ..geometry import Chart, DifferentialForm, VectorField, field_text, form_text
from ..algebra.ratfunc import rational_text

RF = RationalFunction

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<wedge>/\\)"
    r"|(?P<op>[-+*/^(),\[\]])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, wedge, op, eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", line, pos - line_start + 1, text[pos])
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            nl = chunk.count("\n")
            if nl:
                line += nl
                line_start = pos + chunk.rfind("\n") + 1
        else:
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


@dataclass
class Scope:
    """Symbols visible to the parser: a chart plus an optional algebraic generator."""

    chart: Chart
    extension: Extension | None = None
    extra: frozenset = field(default_factory=frozenset)

    def names(self) -> set:
        out = set(self.chart.names) | set(self.extra)
        if self.extension is not None:
            out.add(self.extension.name)
        return out


class _Field(dict):
    """Partial vector field ``{coordinate: coefficient}``."""


class _Form:
    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict):
        self.degree = degree
        self.terms = terms  # {tuple of coordinate names: RF}


def _kind(v) -> str:
    if isinstance(v, RF):
        return "function"
    if isinstance(v, _Field):
        return "vector field"
    return "form"


class _Parser:
    def __init__(self, text: str, scope: Scope):
        self.toks = tokenize(text)
        self.i = 0
        self.scope = scope
        self.visible = scope.names()

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, tok.text or "<end of input>")

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op", "wedge"):
            raise self.error(f"expected {text!r}")
        return self.next()

    # grammar -------------------------------------------------------------
    def parse(self):
        v = self.wedge()
        if self.tok.kind != "eof":
            raise self.error("unexpected token")
        return v

    def wedge(self):
        left = self.sum()
        while self.tok.kind == "wedge":
            op = self.next()
            right = self.sum()
            left = self._wedge(left, right, op)
        return left

    def sum(self):
        left = self.product()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.next()
            right = self.product()
            left = self._add(left, right if op.text == "+" else self._neg(right), op)
        return left

    def product(self):
        left = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.next()
            right = self.unary()
            left = self._mul(left, right, op) if op.text == "*" else self._div(left, right, op)
        return left

    def unary(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.next()
            return self._neg(self.unary())
        return self.power()

    def power(self):
        base_tok = self.tok
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            op = self.next()
            n = self._exponent()
            if not isinstance(base, RF):
                raise self.error(f"cannot raise a {_kind(base)} to a power", op)
            try:
                return base**n
            except DivisionByZero:
                raise self.error("zero raised to a negative power", base_tok) from None
        return base

    def _exponent(self) -> int:
        sign = 1
        if self.tok.kind == "op" and self.tok.text == "-":
            self.next()
            sign = -1
        if self.tok.kind != "int":
            raise self.error("exponent must be an integer literal")
        n = int(self.next().text)
        if self.tok.kind == "op" and self.tok.text == "^":
            self.next()
            n = n ** self._exponent()
        return sign * n

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.next()
            return RF.constant(int(t.text))
        if t.kind == "op" and t.text == "(":
            self.next()
            v = self.wedge()
            self.expect(")")
            return v
        if t.kind == "ident":
            self.next()
            nxt = self.tok
            adjacent = nxt.line == t.line and nxt.col == t.col + len(t.text)
            if t.text in ("d", "D") and nxt.kind == "op" and nxt.text == "(" and adjacent:
                return self._basis_atom(t)
            if nxt.kind == "op" and nxt.text == "[" and adjacent:
                return self._jet(t)
            return self._symbol(t.text, t)
        raise self.error("expected an expression")

    def _basis_atom(self, head: Token):
        self.next()
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected a coordinate name")
        self.next()
        name = t.text
        if self.tok.kind == "op" and self.tok.text == "[":
            name = self._jet_suffix(t)
        self.expect(")")
        if name not in self.scope.chart.fiber:
            if name in self.scope.chart.params:
                raise ParseError(f"{name!r} is a parameter, not a fiber coordinate", t.line, t.col, t.text)
            raise UnknownSymbol(f"{t.line}:{t.col}: unknown coordinate {name!r} (at {t.text!r})")
        if head.text == "d":
            return _Form(1, {(name,): RF.constant(1)})
        return _Field({name: RF.constant(1)})

    def _jet_suffix(self, t: Token) -> str:
        self.expect("[")
        idx = []
        while True:
            if self.tok.kind != "int":
                raise self.error("jet index must be a non-negative integer")
            idx.append(int(self.next().text))
            if self.tok.kind == "op" and self.tok.text == ",":
                self.next()
                continue
            break
        self.expect("]")
        if not any(idx):
            return t.text
        return f"{t.text}[{','.join(map(str, idx))}]"

    def _jet(self, t: Token):
        return self._symbol(self._jet_suffix(t), t)

    def _symbol(self, name: str, t: Token):
        ext = self.scope.extension
        if ext is not None and name == ext.name:
            return RF.constant(ext.generator)
        if name not in self.visible:
            raise UnknownSymbol(f"{t.line}:{t.col}: symbol {name!r} is not declared in {self.scope.chart} (at {t.text!r})")
        return RF.symbol(name)

    # typed operations --------------------------------------------------------
    def _neg(self, v):
        if isinstance(v, RF):
            return -v
        if isinstance(v, _Field):
            return _Field({k: -c for k, c in v.items()})
        return _Form(v.degree, {k: -c for k, c in v.terms.items()})

    def _add(self, a, b, op: Token):
        if isinstance(a, RF) and isinstance(b, RF):
            return a + b
        if isinstance(a, _Field) and isinstance(b, _Field):
            out = _Field(a)
            for k, c in b.items():
                out[k] = out.get(k, RF.constant(0)) + c
            return out
        if isinstance(a, _Form) and isinstance(b, _Form):
            if a.degree != b.degree:
                raise self.error(f"cannot add forms of degree {a.degree} and {b.degree}", op)
            terms = dict(a.terms)
            for k, c in b.terms.items():
                terms[k] = terms.get(k, RF.constant(0)) + c
            return _Form(a.degree, terms)
        if _is_zero(a):
            return b
        if _is_zero(b):
            return a
        raise self.error(f"cannot add a {_kind(a)} and a {_kind(b)}", op)

    def _mul(self, a, b, op: Token):
        if isinstance(a, RF) and isinstance(b, RF):
            return a * b
        if isinstance(a, RF) or isinstance(b, RF):
            s, v = (a, b) if isinstance(a, RF) else (b, a)
            if isinstance(v, _Field):
                return _Field({k: s * c for k, c in v.items()})
            return _Form(v.degree, {k: s * c for k, c in v.terms.items()})
        raise self.error(f"cannot multiply a {_kind(a)} by a {_kind(b)}; use /\\ for forms", op)

    def _div(self, a, b, op: Token):
        if not isinstance(b, RF):
            raise self.error(f"cannot divide by a {_kind(b)}", op)
        if b.is_zero():
            raise self.error("division by zero", op)
        return self._mul(a, b.inverse(), op)

    def _wedge(self, a, b, op: Token):
        if isinstance(a, RF):
            a = _Form(0, {(): a})
        if isinstance(b, RF):
            b = _Form(0, {(): b})
        if not (isinstance(a, _Form) and isinstance(b, _Form)):
            raise self.error("wedge needs differential forms", op)
        terms: dict = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                k = ka + kb
                terms[k] = terms.get(k, RF.constant(0)) + ca * cb
        return _Form(a.degree + b.degree, terms)


def _is_zero(v) -> bool:
    return isinstance(v, RF) and v.is_zero()


def parse(text: str, scope: Scope | Chart):
    """Parse text into a RationalFunction, VectorField or DifferentialForm."""
    if isinstance(scope, Chart):
        scope = Scope(scope)
    value = _Parser(text, scope).parse()
    chart = scope.chart
    if isinstance(value, _Field):
        return VectorField(chart, dict(value))
    if isinstance(value, _Form):
        if value.degree > chart.m:
            raise DegreeOverflow(f"degree {value.degree} exceeds fiber dimension {chart.m}")
        return DifferentialForm(chart, value.degree, value.terms)
    return value


def parse_function(text: str, scope: Scope | Chart) -> RF:
    v = parse(text, scope)
    if not isinstance(v, RF):
        raise ParseError(f"expected a function, got a {_describe(v)}", 1, 1, text.strip()[:20])
    return v


def parse_field(text: str, scope: Scope | Chart) -> VectorField:
    v = parse(text, scope)
    if isinstance(v, RF) and v.is_zero():
        chart = scope.chart if isinstance(scope, Scope) else scope
        return VectorField.zero(chart)
    if not isinstance(v, VectorField):
        raise ParseError(f"expected a vector field, got a {_describe(v)}", 1, 1, text.strip()[:20])
    return v


def parse_form(text: str, scope: Scope | Chart) -> DifferentialForm:
    v = parse(text, scope)
    chart = scope.chart if isinstance(scope, Scope) else scope
    if isinstance(v, RF):
        return DifferentialForm.function(chart, v)
    if not isinstance(v, DifferentialForm):
        raise ParseError(f"expected a differential form, got a {_describe(v)}", 1, 1, text.strip()[:20])
    return v


def _describe(v) -> str:
    if isinstance(v, RF):
        return "function"
    if isinstance(v, VectorField):
        return "vector field"
    return "differential form"


def to_text(value) -> str:
    """Canonical text; ``parse(to_text(E)) == E``."""
    if isinstance(value, RF):
        return rational_text(value)
    if isinstance(value, Polynomial):
        return rational_text(RF(value))
    if isinstance(value, VectorField):
        return field_text(value)
    if isinstance(value, DifferentialForm):
        return form_text(value)
    if isinstance(value, (int, Fraction)):
        return rational_text(RF.constant(value))
    raise TypeError(f"no canonical text for {type(value).__name__}")


_EXT = re.compile(r"^\s*(?:extension\s+)?([A-Za-z_][A-Za-z0-9_]*)\s*:(.*)$", re.S)


def parse_extension(text: str) -> Extension:
    """``'extension rho: rho^6 = 2'`` (the leading keyword is optional)."""
    m = _EXT.match(text)
    if not m:
        raise ParseError("expected 'extension NAME: LHS = RHS'", 1, 1, text.strip()[:20])
    name, body = m.group(1), m.group(2)
    if body.count("=") != 1:
        raise ParseError("extension needs exactly one '='", 1, 1, body.strip()[:20])
    lhs_text, rhs_text = body.split("=")
    scope = Scope(Chart((name,)))
    lhs = parse_function(lhs_text, scope)
    rhs = parse_function(rhs_text, scope)
    rel = lhs - rhs
    if not rel.is_polynomial():
        raise ParseError("extension relation must be polynomial", 1, 1, body.strip()[:20])
    uni = rel.as_polynomial().univariate(name)
    deg = max(uni)
    if deg < 2:
        raise ParseError("extension relation must have degree >= 2", 1, 1, body.strip()[:20])
    coeffs = [uni.get(i, Polynomial()).constant_value() if i in uni else 0 for i in range(deg + 1)]
    lead = Fraction(coeffs[-1])
    return Extension(name, [Fraction(c) / lead for c in coeffs])


def extension_text(ext: Extension) -> str:
    return f"extension {ext.name}: {ext.defining_polynomial_text()}"


def parse_chart(fiber: str | Iterable[str], params: str | Iterable[str] = ()) -> Chart:
    def split(v):
        if isinstance(v, str):
            return tuple(s.strip() for s in v.split(",") if s.strip())
        return tuple(str(s) for s in v)

    return Chart(split(fiber), split(params))
