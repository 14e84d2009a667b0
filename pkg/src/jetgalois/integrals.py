"""First-integral search and verification, rank estimates, dimension polynomials."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .algebra import Polynomial, RationalFunction, iter_monomials, lcm
from .algebra.matrix import nullspace_rows, rank as matrix_rank
from .errors import (
    DenominatorVanishes,
    NonIntegerCoefficients,
    NoPolynomialFit,
    NoValidPoint,
    SliceNotInvariant,
    UnknownSymbol,
    ZeroDenominator,
)
from .geometry import Chart, VectorField, apply_field
from .jets import parse_jet_name
from .verdict import Verdict

RF = RationalFunction


@dataclass(frozen=True)
class FirstIntegralBasis:
    """Integrals found for ``field`` under the given search bounds."""

    field: VectorField
    integrals: tuple[RF, ...]
    degree: int
    denominator: Polynomial | None = None
    jmax: int | None = None
    variables: tuple[str, ...] = ()
    slice: Mapping[str, RF] = dc_field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.integrals)

    def __iter__(self):
        return iter(self.integrals)


def verify_first_integral(X: VectorField, H) -> Verdict:
    """Pass iff ``X(H)`` is exactly zero; otherwise carry the residue."""
    return Verdict.from_residue(apply_field(X, RF.coerce(H)))


# degree functionals ------------------------------------------------------------


def jet_weight(name: str) -> int:
    """Weight of a ring variable: ``|a|`` for a jet ``y[a]``, 1 otherwise."""
    parsed = parse_jet_name(name)
    return sum(parsed[1]) if parsed else 1


def _candidate_monomials(names: Sequence[str], D: int, weighted: bool) -> list:
    monos = list(iter_monomials(list(names), D))
    if weighted:
        monos = [m for m in monos if sum(jet_weight(n) * e for n, e in m) <= D]
    return monos


# slices --------------------------------------------------------------------------


def restrict_to_slice(X: VectorField, slice_: Mapping[str, object]) -> VectorField:
    """Restrict X to the locus ``{s = value}``; the locus must be X-invariant."""
    chart = X.chart
    subs = {str(k): RF.coerce(v) for k, v in slice_.items()}
    for name in subs:
        chart.index(name)
    for name, value in subs.items():
        defining = RF.symbol(name) - value
        residue = apply_field(X, defining).substitute(subs)
        if not residue.is_zero():
            raise SliceNotInvariant(f"X({name} - ({value})) = {residue} does not vanish on the slice")
    kept = tuple(n for n in chart.fiber if n not in subs)
    new_chart = Chart(kept, chart.params)
    return VectorField(new_chart, [X[n].substitute(subs) for n in kept])


# linear-system assembly -------------------------------------------------------


def _field_numerators(X: VectorField) -> tuple[Polynomial, dict[str, Polynomial]]:
    """``X = (1/den) sum N_w d/dw`` with polynomial N_w."""
    den = Polynomial.constant(1)
    for c in X.coeffs:
        if not c.den.is_constant():
            den = lcm(den, c.den)
    nums = {}
    for name, c in zip(X.chart.fiber, X.coeffs):
        if c:
            nums[name] = c.num * den.divexact(c.den)
    return den, nums


def _apply_numerators(nums: Mapping[str, Polynomial], p: Polynomial) -> Polynomial:
    out = Polynomial()
    present = p.variables()
    for name, n in nums.items():
        if name in present:
            out = out + n * p.diff(name)
    return out


def _kernel(columns: list[Polynomial], fiber: Sequence[str]) -> list[list]:
    """Kernel of the linear map ``c -> sum c_i columns[i]`` over Q(params).

    Each column is split into coefficients of monomials in the fiber
    variables; those coefficients are polynomials in the parameters.
    """
    row_index: dict = {}
    rows: list[dict] = []
    symbolic = False
    for j, col in enumerate(columns):
        for mono, coeff in col.coefficients_in(fiber).items():
            r = row_index.get(mono)
            if r is None:
                r = row_index[mono] = len(rows)
                rows.append({})
            rows[r][j] = coeff
            if not coeff.is_constant():
                symbolic = True
    if symbolic:
        rows = [{j: RF(c, reduced=True) for j, c in r.items()} for r in rows]
        return nullspace_rows(rows, len(columns), RF.constant(1))
    rows = [{j: c.constant_value() for j, c in r.items()} for r in rows]
    return nullspace_rows(rows, len(columns), Fraction(1))


def _combine(vec: Sequence, monos: Sequence) -> RF:
    total = RF.constant(0)
    for c, m in zip(vec, monos):
        if c:
            total = total + RF.coerce(c) * RF(Polynomial.monomial(m), reduced=True)
    return total


def find_polynomial_integrals(
    X: VectorField,
    D: int,
    variables: Iterable[str] | None = None,
    slice: Mapping[str, object] | None = None,
    weighted: bool = False,
) -> FirstIntegralBasis:
    """Basis of polynomial first integrals of degree <= D.

    ``variables`` restricts the support of the candidate polynomials;
    ``slice`` restricts X to an invariant coordinate slice first;
    ``weighted`` measures degree with jet weights instead of total degree.
    """
    if D < 0:
        raise ValueError("degree bound must be non-negative")
    if slice:
        X = restrict_to_slice(X, slice)
    names = _support(X.chart, variables)
    monos = _candidate_monomials(names, D, weighted)
    den, nums = _field_numerators(X)
    columns = [_apply_numerators(nums, Polynomial.monomial(m)) for m in monos]
    kernel = _kernel(columns, X.chart.fiber)
    integrals = tuple(_combine(v, monos) for v in kernel)
    return FirstIntegralBasis(
        X, integrals, D, None, None, tuple(names), {str(k): RF.coerce(v) for k, v in (slice or {}).items()}
    )


def _support(chart: Chart, variables: Iterable[str] | None) -> list[str]:
    if variables is None:
        return list(chart.fiber)
    names = list(dict.fromkeys(str(v) for v in variables))
    unknown = [n for n in names if n not in chart.fiber]
    if unknown:
        raise UnknownSymbol(f"{unknown} are not fiber coordinates of {chart}")
    return names


def find_fixed_denominator_integrals(
    X: VectorField,
    Q,
    D: int,
    jmax: int,
    variables: Iterable[str] | None = None,
    slice: Mapping[str, object] | None = None,
    weighted: bool = False,
) -> FirstIntegralBasis:
    """First integrals ``P/Q^j`` with deg P <= D and 0 <= j <= jmax.

    For fixed j the condition ``Q X(P) - j P X(Q) = 0`` is linear in P.
    Results already in the span of earlier ones are dropped.
    """
    Q = RF.coerce(Q)
    if Q.is_zero():
        raise ZeroDenominator("fixed denominator Q is zero")
    if not Q.is_polynomial():
        raise ValueError("fixed denominator must be a polynomial")
    if slice:
        X = restrict_to_slice(X, slice)
        Q = Q.substitute(slice)
        if Q.is_zero():
            raise ZeroDenominator("fixed denominator vanishes on the slice")
    q = Q.as_polynomial()
    names = _support(X.chart, variables)
    monos = _candidate_monomials(names, D, weighted)
    den, nums = _field_numerators(X)
    nq = _apply_numerators(nums, q)
    mono_polys = [Polynomial.monomial(m) for m in monos]
    base_cols = [_apply_numerators(nums, p) for p in mono_polys]

    found: list[RF] = []
    qpow = [Polynomial.constant(1)]
    for _ in range(jmax):
        qpow.append(qpow[-1] * q)
    for j in range(jmax + 1):
        cols = [q * c - (p * nq).scale(j) if j else c for p, c in zip(mono_polys, base_cols)]
        for vec in _kernel(cols, X.chart.fiber):
            P = _combine(vec, monos)
            H = P / RF(qpow[j], reduced=True)
            if _extends_span(found, H, X.chart.fiber):
                found.append(H)
    return FirstIntegralBasis(
        X, tuple(found), D, q, jmax, tuple(names), {str(k): RF.coerce(v) for k, v in (slice or {}).items()}
    )


def _coefficient_rows(fs: Sequence[RF], fiber: Sequence[str]) -> list[dict]:
    """Coefficients over Q(params) of each f on the fiber monomials, after a common denominator."""
    den = Polynomial.constant(1)
    for f in fs:
        if not f.den.is_constant():
            den = lcm(den, f.den)
    rows = []
    for f in fs:
        p = f.num * den.divexact(f.den)
        rows.append({m: RF(c) for m, c in p.coefficients_in(fiber).items()})
    return rows


def span_rank(fs: Sequence, fiber: Sequence[str]) -> int:
    """Dimension over Q(params) of the span of the functions fs."""
    fs = [RF.coerce(f) for f in fs]
    if not fs:
        return 0
    rows = _coefficient_rows(fs, fiber)
    cols = {m: i for i, m in enumerate(sorted({m for r in rows for m in r}, key=str))}
    return matrix_rank([[r.get(m, RF.constant(0)) for m in cols] for r in rows], len(cols))


def in_span(basis: Sequence, H, fiber: Sequence[str]) -> bool:
    return span_rank(list(basis) + [H], fiber) == span_rank(basis, fiber)


def _extends_span(found: list, f: RF, fiber: Sequence[str]) -> bool:
    return span_rank(found + [f], fiber) == len(found) + 1


# rank -------------------------------------------------------------------------


DEFAULT_SEED = 0xC0FFEE


def integral_rank(basis: FirstIntegralBasis | Sequence, seed: int = DEFAULT_SEED, chart: Chart | None = None,
                  trials: int = 2, attempts: int = 12) -> int:
    """Rank of the differentials of the integrals at seeded random points."""
    if isinstance(basis, FirstIntegralBasis):
        integrals, chart = list(basis.integrals), chart or basis.field.chart
    else:
        integrals = [RF.coerce(h) for h in basis]
    if not integrals:
        raise ValueError("integral_rank needs a nonempty basis")
    if chart is None:
        raise ValueError("a chart is required for a bare list of integrals")
    fiber = list(chart.fiber)
    grads = [[h.diff(n) for n in fiber] for h in integrals]
    names = sorted(set(chart.names).union(*(h.variables() for h in integrals)))
    rng = random.Random(seed)
    bound = 8
    best, valid = 0, 0
    for _ in range(attempts):
        point = {n: Fraction(rng.randint(-bound, bound)) for n in names}
        try:
            if any(h.den.evaluate(point).is_zero() for h in integrals):
                raise DenominatorVanishes("integral undefined at sample point")
            values = [[g.value(point) for g in row] for row in grads]
        except DenominatorVanishes:
            bound *= 2
            continue
        best = max(best, matrix_rank(values, len(fiber)))
        valid += 1
        if valid >= trials:
            break
    if not valid:
        raise NoValidPoint(f"no admissible point found in {attempts} attempts")
    return best


# dimension polynomials -----------------------------------------------------------


@dataclass(frozen=True)
class DimensionPolynomial:
    """``P(k) = sum a_i C(k+i, i)``."""

    coeffs: tuple[int, ...]

    @property
    def type(self) -> int:
        nz = [i for i, a in enumerate(self.coeffs) if a]
        return nz[-1] if nz else 0

    @property
    def leading(self) -> int:
        return self.coeffs[self.type] if self.coeffs else 0

    def __call__(self, k: int) -> int:
        return sum(a * comb(k + i, i) for i, a in enumerate(self.coeffs))

    def __str__(self) -> str:
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            parts.append(f"{a}" if i == 0 else f"{a}*C(k+{i},{i})")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def fit_dimension_polynomial(samples: Iterable[tuple[int, int]], max_type: int | None = None) -> DimensionPolynomial:
    """Smallest-type integer polynomial in the basis ``C(k+i,i)`` through the samples."""
    pts = sorted((int(k), int(v)) for k, v in samples)
    if len(pts) < 2:
        raise NoPolynomialFit("at least two samples are required")
    if len({k for k, _ in pts}) != len(pts):
        raise NoPolynomialFit("sample orders must be distinct")
    top = len(pts) - 1 if max_type is None else min(max_type, len(pts) - 1)
    for ell in range(top + 1):
        sol = _solve_binomial(pts[: ell + 1], ell)
        if all(sum(a * comb(k + i, i) for i, a in enumerate(sol)) == v for k, v in pts):
            if any(a.denominator != 1 for a in sol):
                raise NonIntegerCoefficients(f"fit has non-integer coefficients {[str(a) for a in sol]}")
            return DimensionPolynomial(tuple(int(a) for a in sol))
    raise NoPolynomialFit(f"no polynomial of type <= {top} matches the samples")


def _solve_binomial(pts: Sequence[tuple[int, int]], ell: int) -> list[Fraction]:
    # square Vandermonde-like system in the binomial basis, Gaussian elimination
    n = ell + 1
    a = [[Fraction(comb(k + i, i)) for i in range(n)] + [Fraction(v)] for k, v in pts]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


# specialization ---------------------------------------------------------------


def specialize_integral(H, q: Mapping[str, object], params: Iterable[str] | None = None) -> RF:
    """Substitute parameter values; fails if a denominator vanishes identically."""
    H = RF.coerce(H)
    if params is not None:
        missing = set(params) - set(q)
        if missing:
            raise UnknownSymbol(f"no value given for parameters {sorted(missing)}")
    return H.substitute({str(k): RF.coerce(v) for k, v in q.items()})
