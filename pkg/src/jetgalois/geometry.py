"""Vector fields, relative differential forms and rational maps on a chart.

Everything here lives in fiber directions only: parameters are constants
for every derivation, and forms are built from the differentials of the
fiber coordinates (relative forms).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .algebra import Matrix, RationalFunction, Symbol, SymbolKind
from .errors import (
    ChartMismatch,
    DegreeMismatch,
    DegreeOverflow,
    Singular,
    SingularJacobian,
    UnknownSymbol,
    ZeroForm,
)

RF = RationalFunction


@dataclass(frozen=True)
class Chart:
    """Local model of a fibration: ordered fiber coordinates and parameters."""

    fiber: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "fiber", tuple(str(s) for s in self.fiber))
        object.__setattr__(self, "params", tuple(str(s) for s in self.params))
        if not self.fiber:
            raise ValueError("a chart needs at least one fiber coordinate")
        names = self.fiber + self.params
        if len(set(names)) != len(names):
            raise ValueError(f"chart symbols must be distinct: {names}")

    @property
    def m(self) -> int:
        return len(self.fiber)

    @property
    def d(self) -> int:
        return len(self.params)

    @property
    def names(self) -> tuple[str, ...]:
        return self.fiber + self.params

    def symbols(self) -> list[Symbol]:
        return [Symbol(n, SymbolKind.FIBER) for n in self.fiber] + [
            Symbol(n, SymbolKind.PARAMETER) for n in self.params
        ]

    def index(self, name: str) -> int:
        try:
            return self.fiber.index(name)
        except ValueError:
            raise UnknownSymbol(f"{name!r} is not a fiber coordinate of {self}") from None

    def check(self, f: RF, extra: Iterable[str] = ()) -> None:
        unknown = f.variables() - set(self.names) - set(extra)
        if unknown:
            raise UnknownSymbol(f"symbols {sorted(unknown)} are not declared in {self}")

    def __str__(self) -> str:
        p = f"; {', '.join(self.params)}" if self.params else ""
        return f"Chart({', '.join(self.fiber)}{p})"


class VectorField:
    """Derivation ``sum_i X_i d/dy_i`` tangent to the fibers."""

    __slots__ = ("chart", "coeffs")

    def __init__(self, chart: Chart, coeffs: Mapping[str, object] | Sequence[object]):
        self.chart = chart
        if isinstance(coeffs, Mapping):
            bad = set(map(str, coeffs)) - set(chart.fiber)
            if bad:
                if bad & set(chart.params):
                    raise ChartMismatch(f"vector fields have no component on parameters {sorted(bad)}")
                raise UnknownSymbol(f"{sorted(bad)} are not fiber coordinates of {chart}")
            vals = tuple(RF.coerce(coeffs.get(n, 0)) for n in chart.fiber)
        else:
            vals = tuple(RF.coerce(c) for c in coeffs)
            if len(vals) != chart.m:
                raise ChartMismatch(f"expected {chart.m} components, got {len(vals)}")
        self.coeffs = vals

    @classmethod
    def zero(cls, chart: Chart) -> VectorField:
        return cls(chart, [0] * chart.m)

    @classmethod
    def coordinate(cls, chart: Chart, name: str) -> VectorField:
        i = chart.index(name)
        return cls(chart, [1 if j == i else 0 for j in range(chart.m)])

    def __getitem__(self, name: str) -> RF:
        return self.coeffs[self.chart.index(name)]

    def as_dict(self) -> dict[str, RF]:
        return dict(zip(self.chart.fiber, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, VectorField) and self.chart == other.chart and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.chart, self.coeffs))

    def _same(self, other: VectorField) -> None:
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart} != {other.chart}")

    def __add__(self, other: VectorField) -> VectorField:
        self._same(other)
        return VectorField(self.chart, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: VectorField) -> VectorField:
        self._same(other)
        return VectorField(self.chart, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> VectorField:
        return VectorField(self.chart, [-a for a in self.coeffs])

    def scale(self, f) -> VectorField:
        f = RF.coerce(f)
        return VectorField(self.chart, [f * a for a in self.coeffs])

    def __call__(self, f) -> RF:
        return apply_field(self, f)

    def substitute(self, mapping: Mapping[str, object]) -> VectorField:
        """Substitute for parameters (or other non-fiber symbols) in every coefficient."""
        clash = set(mapping) & set(self.chart.fiber)
        if clash:
            raise ChartMismatch(f"cannot substitute fiber coordinates {sorted(clash)} in a field")
        return VectorField(self.chart, [c.substitute(mapping) for c in self.coeffs])

    def __repr__(self) -> str:
        return f"VectorField({self.chart}, {dict((n, str(c)) for n, c in self.as_dict().items())})"


def apply_field(X: VectorField, f) -> RF:
    """``X(f) = sum_i X_i df/dy_i``."""
    f = RF.coerce(f)
    X.chart.check(f)
    total = RF.constant(0)
    present = f.variables()
    for name, c in zip(X.chart.fiber, X.coeffs):
        if c and name in present:
            total = total + c * f.diff(name)
    return total


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    if X.chart != Y.chart:
        raise ChartMismatch(f"{X.chart} != {Y.chart}")
    return VectorField(X.chart, [apply_field(X, b) - apply_field(Y, a) for a, b in zip(X.coeffs, Y.coeffs)])


# forms -----------------------------------------------------------------------


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted tuple of a wedge index list; None if an index repeats."""
    if len(set(idx)) != len(idx):
        return None
    arr = list(idx)
    sign = 1
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


class DifferentialForm:
    """Relative g-form ``sum_I f_I dy_I`` with I strictly increasing fiber indices."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[tuple, object] | None = None):
        if degree < 0:
            raise ValueError("form degree must be non-negative")
        if degree > chart.m:
            raise DegreeOverflow(f"degree {degree} exceeds fiber dimension {chart.m}")
        self.chart = chart
        self.degree = degree
        clean: dict = {}
        for idx, c in (terms or {}).items():
            idx = tuple(chart.index(i) if isinstance(i, str) else int(i) for i in idx)
            if len(idx) != degree:
                raise DegreeMismatch(f"index {idx} in a {degree}-form")
            ss = _sort_sign(idx)
            if ss is None:
                continue
            sign, key = ss
            c = RF.coerce(c)
            v = clean.get(key, RF.constant(0)) + (c if sign > 0 else -c)
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self.terms = clean

    @classmethod
    def function(cls, chart: Chart, f) -> DifferentialForm:
        return cls(chart, 0, {(): f})

    @classmethod
    def basis(cls, chart: Chart, *names: str) -> DifferentialForm:
        """``dy_a ^ dy_b ^ ...`` for the given fiber coordinates."""
        return cls(chart, len(names), {tuple(chart.index(n) for n in names): 1})

    @classmethod
    def volume(cls, chart: Chart) -> DifferentialForm:
        return cls(chart, chart.m, {tuple(range(chart.m)): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *names: str) -> RF:
        idx = tuple(self.chart.index(n) for n in names)
        ss = _sort_sign(idx)
        if ss is None:
            return RF.constant(0)
        sign, key = ss
        c = self.terms.get(key, RF.constant(0))
        return c if sign > 0 else -c

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.chart, self.degree, frozenset(self.terms.items())))

    def _same(self, other: DifferentialForm) -> None:
        if self.chart != other.chart:
            raise ChartMismatch(f"{self.chart} != {other.chart}")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        self._same(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise DegreeMismatch("cannot add forms of different degree")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, RF.constant(0)) + v
        return DifferentialForm(self.chart, self.degree, terms)

    def __neg__(self) -> DifferentialForm:
        return DifferentialForm(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        return self + (-other)

    def scale(self, f) -> DifferentialForm:
        f = RF.coerce(f)
        return DifferentialForm(self.chart, self.degree, {k: f * v for k, v in self.terms.items()})

    def __rmul__(self, f) -> DifferentialForm:
        return self.scale(f)

    def __xor__(self, other: DifferentialForm) -> DifferentialForm:
        return wedge(self, other)

    def __repr__(self) -> str:
        parts = []
        for idx, c in sorted(self.terms.items()):
            basis = "^".join(f"d{self.chart.fiber[i]}" for i in idx) or "1"
            parts.append(f"({c})*{basis}")
        return f"DifferentialForm[{self.degree}](" + " + ".join(parts or ["0"]) + ")"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    a._same(b)
    deg = a.degree + b.degree
    if deg > a.chart.m:
        raise DegreeOverflow(f"wedge of degree {deg} exceeds fiber dimension {a.chart.m}")
    terms: dict = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            ss = _sort_sign(ia + ib)
            if ss is None:
                continue
            sign, key = ss
            prod = ca * cb
            terms[key] = terms.get(key, RF.constant(0)) + (prod if sign > 0 else -prod)
    return DifferentialForm(a.chart, deg, terms)


def exterior_derivative(w: DifferentialForm) -> DifferentialForm:
    chart = w.chart
    if w.degree + 1 > chart.m:
        return DifferentialForm(chart, w.degree)  # top forms are closed
    terms: dict = {}
    for idx, c in w.terms.items():
        present = c.variables()
        for j, name in enumerate(chart.fiber):
            if j in idx or name not in present:
                continue
            dc = c.diff(name)
            if not dc:
                continue
            sign, key = _sort_sign((j,) + idx)
            terms[key] = terms.get(key, RF.constant(0)) + (dc if sign > 0 else -dc)
    return DifferentialForm(chart, w.degree + 1, terms)


def interior_product(X: VectorField, w: DifferentialForm) -> DifferentialForm:
    if X.chart != w.chart:
        raise ChartMismatch(f"{X.chart} != {w.chart}")
    if w.degree == 0:
        return DifferentialForm(w.chart, 0)
    terms: dict = {}
    for idx, c in w.terms.items():
        for s, i in enumerate(idx):
            xi = X.coeffs[i]
            if not xi:
                continue
            key = idx[:s] + idx[s + 1 :]
            v = c * xi
            terms[key] = terms.get(key, RF.constant(0)) + (v if s % 2 == 0 else -v)
    return DifferentialForm(w.chart, w.degree - 1, terms)


def lie_derivative_form(X: VectorField, w: DifferentialForm) -> DifferentialForm:
    """Cartan's formula ``L_X w = i_X dw + d i_X w``."""
    if X.chart != w.chart:
        raise ChartMismatch(f"{X.chart} != {w.chart}")
    if w.degree == 0:
        return DifferentialForm.function(w.chart, apply_field(X, w.terms.get((), RF.constant(0))))
    second = exterior_derivative(interior_product(X, w))
    if w.degree == w.chart.m:
        return second
    return interior_product(X, exterior_derivative(w)) + second


def divergence(X: VectorField, dvol: DifferentialForm) -> RF:
    """The function c with ``L_X dvol = c * dvol``."""
    if dvol.degree != dvol.chart.m:
        raise DegreeMismatch("divergence needs a top-degree form")
    if dvol.is_zero():
        raise ZeroForm("volume form is zero")
    key = tuple(range(dvol.chart.m))
    lie = lie_derivative_form(X, dvol)
    return lie.terms.get(key, RF.constant(0)) / dvol.terms[key]


def hamiltonian_field(H, chart: Chart) -> VectorField:
    """``d/dx + H_v d/du - H_u d/dv`` on a chart with fiber (x, u, v)."""
    if chart.m != 3:
        raise ChartMismatch(f"Hamiltonian fields need fiber coordinates (x, u, v), got {chart.fiber}")
    H = RF.coerce(H)
    chart.check(H)
    _, u, v = chart.fiber
    return VectorField(chart, [1, H.diff(v), -H.diff(u)])


# rational maps -----------------------------------------------------------------


class RationalMap:
    """Map from a source chart to a target chart, one component per target symbol."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Chart, target: Chart, components: Mapping[str, object]):
        missing = set(target.names) - set(components)
        if missing:
            raise ChartMismatch(f"no component for target symbols {sorted(missing)}")
        extra = set(components) - set(target.names)
        if extra:
            raise UnknownSymbol(f"{sorted(extra)} are not target symbols")
        comps = {n: RF.coerce(components[n]) for n in target.names}
        for c in comps.values():
            source.check(c)
        self.source = source
        self.target = target
        self.components = comps

    @classmethod
    def identity(cls, chart: Chart) -> RationalMap:
        return cls(chart, chart, {n: RF.symbol(n) for n in chart.names})

    def fiber_jacobian(self) -> Matrix:
        """``D phi``: target fiber components differentiated in source fiber coordinates."""
        return Matrix([[self.components[t].diff(s) for s in self.source.fiber] for t in self.target.fiber])

    def pull(self, f) -> RF:
        """``f o phi``."""
        f = RF.coerce(f)
        self.target.check(f)
        return f.substitute(self.components)

    def compose(self, inner: RationalMap) -> RationalMap:
        """``self o inner``."""
        if inner.target != self.source:
            raise ChartMismatch("maps do not compose")
        return RationalMap(inner.source, self.target, {n: c.substitute(inner.components) for n, c in self.components.items()})


def pullback_form(phi: RationalMap, w: DifferentialForm) -> DifferentialForm:
    if w.chart != phi.target:
        raise ChartMismatch(f"form lives on {w.chart}, map targets {phi.target}")
    src = phi.source
    diffs = []
    for t in phi.target.fiber:
        c = phi.components[t]
        diffs.append(DifferentialForm(src, 1, {(j,): c.diff(s) for j, s in enumerate(src.fiber)}))
    out = DifferentialForm(src, w.degree) if w.degree <= src.m else None
    if out is None:
        raise DegreeOverflow(f"cannot pull a {w.degree}-form back to a {src.m}-dimensional fiber")
    for idx, c in w.terms.items():
        term = DifferentialForm.function(src, phi.pull(c))
        for i in idx:
            term = wedge(term, diffs[i])
        if term.degree == 0:
            term = DifferentialForm(src, 0, term.terms)
        out = out + term
    return out


def pullback_field(phi: RationalMap, X: VectorField) -> VectorField:
    """The field Y on the source with ``D phi . Y = X o phi``."""
    if X.chart != phi.target:
        raise ChartMismatch(f"field lives on {X.chart}, map targets {phi.target}")
    if phi.source.m != phi.target.m:
        raise ChartMismatch("pullback of fields needs equal fiber dimensions")
    rhs = [phi.pull(c) for c in X.coeffs]
    try:
        _, inv = phi.fiber_jacobian().det_and_inverse()
    except Singular as exc:
        raise SingularJacobian(str(exc)) from None
    return VectorField(phi.source, inv.apply(rhs))


_SIMPLE = re.compile(r"-?[A-Za-z0-9_\[\],^*/]+")


def _scaled(c: RF, atom: str) -> str:
    from .algebra.ratfunc import rational_text

    if c == 1:
        return atom
    if c == -1:
        return f"-{atom}"
    text = rational_text(c)
    return f"{text}*{atom}" if _SIMPLE.fullmatch(text) else f"({text})*{atom}"


def _join(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def field_text(X: VectorField) -> str:
    """Canonical text ``c1*D(y1) + ...`` in the expression grammar."""
    return _join([_scaled(c, f"D({name})") for name, c in zip(X.chart.fiber, X.coeffs) if c])


def form_text(w: DifferentialForm) -> str:
    from .algebra.ratfunc import rational_text

    parts = []
    for idx, c in sorted(w.terms.items()):
        basis = " /\\ ".join(f"d({w.chart.fiber[i]})" for i in idx)
        parts.append(f"({rational_text(c)})" if not basis else _scaled(c, basis))
    if len(parts) > 1 and w.degree > 1:
        # wedge binds loosest, so each product needs its own parentheses
        parts = [f"({p})" for p in parts]
    return " + ".join(parts) if parts else "0"


def all_increasing(m: int, g: int) -> list[tuple[int, ...]]:
    return list(combinations(range(m), g))
