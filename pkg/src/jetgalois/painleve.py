"""The six Painlevé equations, their Hamiltonians and four confluences.

Each equation ``u'' = F(x, u, u')`` is the vector field
``d/dx + v d/du + F(x, u, v) d/dv`` on the chart ``(x, u, v)``.
Radicals in the confluence maps live in ``Q[rho]/(rho^6 - 2)`` with
``sqrt(2) = rho^3`` and ``2^(2/3) = rho^4``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .algebra import Extension, Polynomial, RationalFunction, lcm
from .algebra.matrix import nullspace_rows
from .errors import ArityMismatch, NoSolution, PoleAtZero
from .geometry import (
    Chart,
    DifferentialForm,
    RationalMap,
    VectorField,
    divergence,
    hamiltonian_field,
    pullback_field,
)
from .verdict import Verdict

RF = RationalFunction
RHO = Extension("rho", [-2, 0, 0, 0, 0, 0, 1])


class PainleveId(str, Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"

    @classmethod
    def parse(cls, text) -> PainleveId:
        if isinstance(text, cls):
            return text
        if isinstance(text, int) and 1 <= text <= 6:
            return list(cls)[text - 1]
        key = str(text).strip().upper()
        if key.startswith("P_"):
            key = key[2:]
        try:
            return cls(key)
        except ValueError:
            raise ArityMismatch(f"unknown Painleve equation {text!r}") from None


GREEK = ("alpha", "beta", "gamma", "delta")
LATIN = ("a", "b", "c", "d")
FIBER = ("x", "u", "v")


def _v(name: str) -> RF:
    return RF.symbol(name)


def _h(n: int = 1, d: int = 2) -> Fraction:
    return Fraction(n, d)


def _right_hand_sides() -> dict[PainleveId, RF]:
    x, u, v = _v("x"), _v("u"), _v("v")
    al, be, ga, de = (_v(n) for n in GREEK)
    one = RF.constant(1)
    F = {
        PainleveId.I: 6 * u**2 + x,
        PainleveId.II: 2 * u**3 + x * u + al,
        PainleveId.III: v**2 / u - v / x + (al * u**2 + be) / x + ga * u**3 + de / u,
        PainleveId.IV: v**2 / (2 * u) + _h(3) * u**3 + 4 * x * u**2 + 2 * (x**2 - al) * u + be / u,
        PainleveId.V: (one / (2 * u) + one / (u - 1)) * v**2
        - v / x
        + (u - 1) ** 2 / x**2 * (al * u + be / u)
        + ga * u / x
        + de * u * (u + 1) / (u - 1),
        PainleveId.VI: _h() * (one / u + one / (u - 1) + one / (u - x)) * v**2
        - (one / x + one / (x - 1) + one / (u - x)) * v
        + u * (u - 1) * (u - x) / (x**2 * (x - 1) ** 2)
        * (al + be * x / u**2 + ga * (x - 1) / (u - 1) ** 2 + de * x * (x - 1) / (u - x) ** 2),
    }
    return F


def _hamiltonians() -> dict[PainleveId, RF]:
    x, u, v = _v("x"), _v("u"), _v("v")
    a, b, c, d = (_v(n) for n in LATIN)
    return {
        PainleveId.III: (2 * u**2 * v**2 - (2 * a * x * u**2 + (2 * b + 1) * u - 2 * c * x) * v + a * (b + d) * x * u) / x,
        PainleveId.IV: 2 * u * v**2 - (u**2 + 2 * x * u + 2 * a) * v + b * u,
        PainleveId.V: (
            u * (u - 1) ** 2 * v**2
            - (a * (u - 1) ** 2 + b * u * (u - 1) - c * x * u) * v
            + _h(1, 4) * ((a + b) ** 2 - d**2) * (u - 1)
        )
        / x,
        PainleveId.VI: (
            u * (u - 1) * (u - x) * v**2
            - (a * (u - 1) * (u - x) + b * u * (u - x) + (c - 1) * u * (u - 1)) * v
            + _h(1, 4) * ((a + b + c - 1) ** 2 - d**2) * (u - x)
        )
        / (x * (x - 1)),
    }


ARITY = {PainleveId.I: 0, PainleveId.II: 1, PainleveId.III: 4, PainleveId.IV: 2, PainleveId.V: 4, PainleveId.VI: 4}


@dataclass(frozen=True)
class PainleveSpec:
    id: PainleveId
    params: tuple[str, ...]
    F: RF
    hamiltonian: RF | None
    ham_params: tuple[str, ...]

    @property
    def chart(self) -> Chart:
        return Chart(FIBER, self.params)

    @property
    def ham_chart(self) -> Chart:
        return Chart(FIBER, self.ham_params)


@lru_cache(maxsize=None)
def catalog() -> dict[PainleveId, PainleveSpec]:
    F = _right_hand_sides()
    H = _hamiltonians()
    out = {}
    for pid in PainleveId:
        n = ARITY[pid]
        ham = H.get(pid)
        ham_params = tuple(LATIN[:n]) if ham is not None else ()
        out[pid] = PainleveSpec(pid, GREEK[:n], F[pid], ham, ham_params)
    return out


def spec(pid) -> PainleveSpec:
    return catalog()[PainleveId.parse(pid)]


def _check_arity(s: PainleveSpec, specialization: Mapping[str, object]) -> None:
    keys = set(map(str, specialization))
    if keys != set(s.params):
        raise ArityMismatch(
            f"P_{s.id.value} has parameters ({', '.join(s.params)}); got ({', '.join(sorted(keys))})"
        )


def field(pid, specialization: Mapping[str, object] | None = None, params: tuple[str, ...] | None = None) -> VectorField:
    """Catalog field, optionally with its parameters replaced by values or expressions.

    After specialization the chart parameters are ``params`` if given,
    otherwise the variables of the substituted values in sorted order.
    """
    s = spec(pid)
    if specialization is None:
        return VectorField(s.chart, [1, _v("v"), s.F])
    _check_arity(s, specialization)
    subs = {str(k): RF.coerce(v) for k, v in specialization.items()}
    if params is None:
        found = set().union(*(v.variables() for v in subs.values())) if subs else set()
        params = tuple(sorted(found - set(FIBER)))
    F = s.F.substitute(subs)
    return VectorField(Chart(FIBER, params), [1, _v("v"), F])


def volume_form(chart: Chart) -> DifferentialForm:
    return DifferentialForm.volume(chart)


def volume_field(pid) -> VectorField:
    """Field whose volume preservation is checked: X_F for I-II, the Hamiltonian field otherwise."""
    s = spec(pid)
    if s.hamiltonian is None:
        return field(pid)
    return hamiltonian_field(s.hamiltonian, s.ham_chart)


def verify_volume(pid) -> Verdict:
    X = volume_field(pid)
    pid = PainleveId.parse(pid)
    name = f"X_{pid.value}" if spec(pid).hamiltonian is None else f"X_H{pid.value}"
    return Verdict.from_residue(divergence(X, volume_form(X.chart)), f"L_{name}(dx/\\du/\\dv) = 0")


HAMILTONIAN_IDENTITY = "H_vx + H_v*H_vu - H_u*H_vv = F(x, u, H_v)"


def hamiltonian_residue(pid, pm: Mapping[str, object], hamiltonian: RF | None = None) -> RF:
    """``H_vx + H_v H_vu - H_u H_vv - F(x, u, H_v)`` under the parameter map.

    ``hamiltonian`` overrides the catalog Hamiltonian (used to test the checker).
    """
    s = spec(pid)
    if s.hamiltonian is None:
        raise ArityMismatch(f"P_{s.id.value} has no Hamiltonian in the catalog")
    _check_arity(s, pm)
    H = s.hamiltonian if hamiltonian is None else RF.coerce(hamiltonian)
    Hv = H.diff("v")
    lhs = Hv.diff("x") + Hv * Hv.diff("u") - H.diff("u") * Hv.diff("v")
    subs = {str(k): RF.coerce(val) for k, val in pm.items()}
    subs["v"] = Hv
    return lhs - s.F.substitute(subs)


def verify_hamiltonian(pid, pm: Mapping[str, object], hamiltonian: RF | None = None) -> Verdict:
    pid = PainleveId.parse(pid)
    residue = hamiltonian_residue(pid, pm, hamiltonian)
    return Verdict.from_residue(residue, f"{HAMILTONIAN_IDENTITY} for P_{pid.value}")


@dataclass(frozen=True, eq=False)
class ParamMap:
    """Greek parameters as functions of the Hamiltonian parameters."""

    id: PainleveId
    values: dict
    unique: bool

    def __getitem__(self, key: str) -> RF:
        return self.values[key]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __contains__(self, key) -> bool:
        return key in self.values

    def keys(self):
        return self.values.keys()

    def items(self):
        return self.values.items()


@lru_cache(maxsize=None)
def derive_param_map(pid) -> ParamMap:
    """Solve the conjugation identity for (alpha, ..) as functions of (a, b, c, d).

    The residual is affine in the Greek parameters; clearing denominators
    and equating every coefficient in (x, u, v) gives a linear system over
    Q(a, b, c, d) whose kernel is normalized to a unit last coordinate.
    """
    s = spec(pid)
    if s.hamiltonian is None:
        raise ArityMismatch(f"P_{s.id.value} has no Hamiltonian in the catalog")
    zero = {p: RF.constant(0) for p in s.params}
    r0 = hamiltonian_residue(pid, zero)
    cols = []
    for p in s.params:
        unit = dict(zero)
        unit[p] = RF.constant(1)
        cols.append(hamiltonian_residue(pid, unit) - r0)
    cols.append(r0)
    den = Polynomial.constant(1)
    for c in cols:
        den = lcm(den, c.den)
    polys = [c.num * den.divexact(c.den) for c in cols]
    rows: dict = {}
    for j, p in enumerate(polys):
        for mono, coeff in p.coefficients_in(FIBER).items():
            rows.setdefault(mono, {})[j] = RF(coeff)
    kernel = nullspace_rows(list(rows.values()), len(cols), RF.constant(1))
    n = len(s.params)
    affine = [vec for vec in kernel if vec[n]]
    if not affine:
        raise NoSolution(f"no parameter map makes H_{s.id.value} conjugate to P_{s.id.value}")
    vec = affine[0]
    last = vec[n]
    values = {p: vec[i] / last for i, p in enumerate(s.params)}
    return ParamMap(s.id, values, len(kernel) == 1)


# confluences ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Confluence:
    source: PainleveId
    target: PainleveId
    residual: tuple[str, ...]
    fiber_map: dict
    param_map: dict
    scale: RF

    @property
    def name(self) -> str:
        return f"{self.source.value}->{self.target.value}"

    @property
    def source_chart(self) -> Chart:
        return Chart(("t", "f", "g"), self.residual + ("epsilon",))

    @property
    def field_chart(self) -> Chart:
        return Chart(FIBER, self.residual + ("epsilon",))


def _confluences() -> list[Confluence]:
    t, f, g, eps = _v("t"), _v("f"), _v("g"), _v("epsilon")
    a, b, c, d = (_v(n) for n in LATIN)
    rho = RHO.generator
    sqrt2 = RF.constant(rho**3)
    cbrt4 = RF.constant(rho**4)  # 2^(2/3)
    one = RF.constant(1)
    return [
        Confluence(
            PainleveId.III,
            PainleveId.II,
            ("a",),
            {"x": 1 + eps**2 * t, "u": 1 + 2 * eps * f, "v": 2 * g / eps},
            {
                "alpha": -one / (2 * eps**6),
                "beta": 2 * a / eps**3 + one / (2 * eps**6),
                "gamma": one / (4 * eps**6),
                "delta": -one / (4 * eps**6),
            },
            eps**2,
        ),
        Confluence(
            PainleveId.IV,
            PainleveId.II,
            ("a",),
            {
                "x": eps * t / cbrt4 - one / eps**3,
                "u": cbrt4 * f / eps + one / eps**3,
                "v": cbrt4 * cbrt4 * g / eps**2,
            },
            {"alpha": -2 * a - one / (2 * eps**6), "beta": -one / (2 * eps**12)},
            eps / cbrt4,
        ),
        Confluence(
            PainleveId.V,
            PainleveId.IV,
            ("a", "b"),
            {"x": 1 + eps * sqrt2 * t, "u": eps * f / sqrt2, "v": g / 2},
            {
                "alpha": one / (2 * eps**4),
                "beta": b / 4,
                "gamma": -one / eps**4,
                "delta": a / eps**2 - one / (2 * eps**4),
            },
            eps * sqrt2,
        ),
        Confluence(
            PainleveId.VI,
            PainleveId.V,
            ("a", "b", "c", "d"),
            {"x": 1 + eps * t, "u": f, "v": g / eps},
            {"alpha": a, "beta": b, "gamma": -d / eps**2 + c / eps, "delta": d / eps**2},
            eps,
        ),
    ]


@lru_cache(maxsize=None)
def confluences() -> tuple[Confluence, ...]:
    return tuple(_confluences())


def get_confluence(source, target) -> Confluence:
    s, t = PainleveId.parse(source), PainleveId.parse(target)
    for c in confluences():
        if c.source == s and c.target == t:
            return c
    raise ArityMismatch(f"no confluence {s.value}->{t.value} in the catalog")


def confluence_map(c: Confluence) -> RationalMap:
    comps = dict(c.fiber_map)
    for p in c.field_chart.params:
        comps[p] = _v(p)
    return RationalMap(c.source_chart, c.field_chart, comps)


@lru_cache(maxsize=None)
def confluence_field(c: Confluence) -> VectorField:
    """``scale * phi^* X_source`` with the source parameters replaced by ``param_map``."""
    X = field(c.source, c.param_map, params=c.field_chart.params)
    Y = pullback_field(confluence_map(c), X)
    return Y.scale(c.scale)


def _target_at_zero(c: Confluence) -> VectorField:
    tgt = spec(c.target)
    rename = dict(zip(tgt.params, c.residual))
    rename.update({"x": "t", "u": "f", "v": "g"})
    X = field(c.target)
    chart = Chart(("t", "f", "g"), c.residual)
    return VectorField(chart, [coef.rename(rename) for coef in X.coeffs])


def verify_confluence(c: Confluence) -> Verdict:
    """Y must be regular at epsilon = 0 and restrict there to the target field."""
    Y = confluence_field(c)
    at_zero = {"epsilon": Fraction(0)}
    limit = []
    for name, coef in zip(Y.chart.fiber, Y.coeffs):
        if coef.den.evaluate(at_zero).is_zero():
            raise PoleAtZero(f"{name}-coefficient of the {c.name} field has a pole at epsilon = 0")
        limit.append(coef.evaluate(at_zero))
    target = _target_at_zero(c)
    for name, got, want in zip(target.chart.fiber, limit, target.coeffs):
        residue = got - want
        if not residue.is_zero():
            return Verdict(False, residue, f"Y|_{{epsilon=0}} = X_{c.target.value} ({name}-coefficient)")
    return Verdict(True, None, f"Y|_{{epsilon=0}} = X_{c.target.value}")
