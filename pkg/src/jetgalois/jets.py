"""Coordinate rings of frame bundles, total derivatives and prolongation.

Jet coordinates of a frame ``r: (C^m, 0) -> fiber`` are written
``y[a1,...,am]`` for the fiber coordinate ``y`` and multi-index ``a``; the
zero multi-index is the coordinate ``y`` itself. The total derivative in
direction ``i`` sends ``y[a]`` to ``y[a + 1_i]`` and kills parameters.

Note on the index convention: some presentations write the total
derivative as ``y_j^a -> y_j^(a + 1_j)``; that reading does not make
``d_i`` depend on ``i`` and contradicts the first-order prolongation of a
linear system, so ``a + 1_i`` is used throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .algebra import Matrix, Polynomial, RationalFunction, Symbol, SymbolKind
from .errors import ChartMismatch, DegreeMismatch, RankOutOfRange, UnknownSymbol
from .geometry import Chart, DifferentialForm, VectorField

RF = RationalFunction
MultiIndex = tuple  # tuple[int, ...]

_JET_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\[(\d+(?:,\d+)*)\]$")


def jet_name(base: str, alpha: Sequence[int]) -> str:
    if not any(alpha):
        return base
    return f"{base}[{','.join(str(a) for a in alpha)}]"


def parse_jet_name(name: str) -> tuple[str, MultiIndex] | None:
    """``'u[1,0,2]' -> ('u', (1, 0, 2))``; None for a plain identifier."""
    m = _JET_RE.match(name)
    if not m:
        return None
    return m.group(1), tuple(int(a) for a in m.group(2).split(","))


def unit(m: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(m))


@lru_cache(maxsize=None)
def multi_indices(m: int, order: int) -> tuple[MultiIndex, ...]:
    """Multi-indices of length m and weight exactly ``order``, descending lex."""
    if m == 1:
        return ((order,),)
    out = []
    for first in range(order, -1, -1):
        for rest in multi_indices(m - 1, order - first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class JetContext:
    """Order-k frame bundle over a chart."""

    chart: Chart
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("jet order must be non-negative")

    @property
    def m(self) -> int:
        return self.chart.m

    def jet_names(self, min_order: int = 1) -> list[str]:
        names = []
        for n in range(max(min_order, 1), self.order + 1):
            for base in self.chart.fiber:
                for alpha in multi_indices(self.m, n):
                    names.append(jet_name(base, alpha))
        return names

    def jet_chart(self) -> Chart:
        """Chart whose fiber coordinates are the base coordinates and all jets up to ``order``."""
        return _jet_chart(self.chart, self.order)

    def with_order(self, k: int) -> JetContext:
        return JetContext(self.chart, k)

    def classify(self, name: str) -> tuple[str, int | None, MultiIndex | None]:
        """('param'|'jet', fiber index, multi-index) for a symbol of the jet ring."""
        if name in self.chart.params:
            return "param", None, None
        if name in self.chart.fiber:
            return "jet", self.chart.fiber.index(name), (0,) * self.m
        parsed = parse_jet_name(name)
        if parsed and parsed[0] in self.chart.fiber and len(parsed[1]) == self.m:
            return "jet", self.chart.fiber.index(parsed[0]), parsed[1]
        raise UnknownSymbol(f"{name!r} is not a coordinate of the frame bundle over {self.chart}")

    def frame_matrix(self) -> Matrix:
        """``(y^1)_{j,i} = y_j^{1_i}``: row = component, column = direction."""
        return Matrix(
            [[RF.symbol(jet_name(y, unit(self.m, i))) for i in range(self.m)] for y in self.chart.fiber]
        )

    def jacobian(self) -> Polynomial:
        """``det(y_j^{1_i})``, the element inverted in the frame-bundle ring."""
        return self.frame_matrix().det().as_polynomial()


@lru_cache(maxsize=64)
def _jet_chart(chart: Chart, order: int) -> Chart:
    ctx = JetContext(chart, order)
    return Chart(chart.fiber + tuple(ctx.jet_names()), chart.params)


def jet_ring_vars(ctx: JetContext) -> list[Symbol]:
    """Fiber coordinates, parameters, then every jet symbol of order 1..k."""
    out = [Symbol(n, SymbolKind.FIBER) for n in ctx.chart.fiber]
    out += [Symbol(n, SymbolKind.PARAMETER) for n in ctx.chart.params]
    out += [Symbol(n, SymbolKind.JET) for n in ctx.jet_names()]
    return out


def total_derivative(f, i: int, ctx: JetContext) -> RF:
    """Total derivative ``d_i`` (direction ``i`` in 1..m) of a function on the frame bundle."""
    f = RF.coerce(f)
    if not 1 <= i <= ctx.m:
        raise ValueError(f"direction {i} out of range 1..{ctx.m}")
    i -= 1
    total = RF.constant(0)
    for name in sorted(f.variables()):
        kind, j, alpha = ctx.classify(name)
        if kind == "param":
            continue
        raised = tuple(a + (1 if t == i else 0) for t, a in enumerate(alpha))
        total = total + f.diff(name) * RF.symbol(jet_name(ctx.chart.fiber[j], raised))
    return total


def total_derivative_multi(f, alpha: MultiIndex, ctx: JetContext) -> RF:
    f = RF.coerce(f)
    for i, a in enumerate(alpha):
        for _ in range(a):
            f = total_derivative(f, i + 1, ctx)
    return f


def prolong_frame(X: VectorField, ctx: JetContext) -> VectorField:
    """``R_k X`` on the order-k frame bundle: ``R_k X(y_j^a) = d^a(X_j)``."""
    if X.chart != ctx.chart:
        raise ChartMismatch(f"field on {X.chart} cannot be prolonged over {ctx.chart}")
    m = ctx.m
    coeffs: dict[str, RF] = {}
    for j, base in enumerate(ctx.chart.fiber):
        cache: dict[MultiIndex, RF] = {(0,) * m: X.coeffs[j]}
        coeffs[base] = X.coeffs[j]
        for n in range(1, ctx.order + 1):
            for alpha in multi_indices(m, n):
                i = next(t for t, a in enumerate(alpha) if a)
                lower = tuple(a - (1 if t == i else 0) for t, a in enumerate(alpha))
                val = total_derivative(cache[lower], i + 1, ctx)
                cache[alpha] = val
                coeffs[jet_name(base, alpha)] = val
    return VectorField(ctx.jet_chart(), coeffs)


def restrict_field(X: VectorField, chart: Chart) -> VectorField:
    """Components of X on the fiber coordinates of a smaller chart."""
    return VectorField(chart, [X[n] for n in chart.fiber])


# dimension bookkeeping ----------------------------------------------------------


def frame_dim(m: int, d: int, k: int) -> int:
    return (m + d) + m * (comb(m + k, m) - 1)


def gamma_dim(m: int, k: int) -> int:
    return m * (comb(m + k, m) - 1)


def aut_dim(m: int, d: int, k: int) -> int:
    return 2 * (m + d) + m * (comb(m + k, m) - 1)


@dataclass(frozen=True)
class GroupoidDimEstimate:
    k: int
    rank: int
    frame_dim: int
    v_upper: int
    gal_dim_upper: int


def groupoid_dim_upper(ctx: JetContext | Chart, k: int, rank: int) -> GroupoidDimEstimate:
    """Upper bound on dim Gal_k from the rank of known first integrals."""
    chart = ctx.chart if isinstance(ctx, JetContext) else ctx
    fd = frame_dim(chart.m, chart.d, k)
    if not 0 <= rank <= fd:
        raise RankOutOfRange(f"rank {rank} outside [0, {fd}]")
    v = fd - rank
    return GroupoidDimEstimate(k, rank, fd, v, fd + v - gamma_dim(chart.m, k))


# invariant objects -> first integrals ------------------------------------------


def invariant_field_to_integrals(Y: VectorField) -> list[RF]:
    """Components of ``j_0(r^* Y)``: ``H = (y^1)^{-1} . Y(y^0)``."""
    ctx = JetContext(Y.chart, 1)
    if Y.is_zero():
        return [RF.constant(0)] * Y.chart.m
    inv = ctx.frame_matrix().inverse()
    return inv.apply(list(Y.coeffs))


def invariant_form_to_integrals(w: DifferentialForm) -> list[RF]:
    """``H_i = sum_j a_j y_j^{1_i}`` for ``w = sum_j a_j dy_j``."""
    if w.degree != 1:
        raise DegreeMismatch(f"expected a 1-form, got degree {w.degree}")
    chart = w.chart
    m = chart.m
    out = []
    for i in range(m):
        h = RF.constant(0)
        for (j,), a in w.terms.items():
            h = h + a * RF.symbol(jet_name(chart.fiber[j], unit(m, i)))
        out.append(h)
    return out


def invariant_topform_to_integral(dvol: DifferentialForm) -> RF:
    """``f . det(y_j^{1_i})`` for ``dvol = f dy_1 ^ ... ^ dy_m``."""
    chart = dvol.chart
    if dvol.degree != chart.m:
        raise DegreeMismatch(f"expected a {chart.m}-form, got degree {dvol.degree}")
    f = dvol.terms.get(tuple(range(chart.m)), RF.constant(0))
    return f * RF(JetContext(chart, 1).jacobian())
