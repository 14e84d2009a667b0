from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jetgalois import painleve as pl
from jetgalois.algebra import Polynomial, RationalFunction, vars_
from jetgalois.errors import ChartMismatch, DegreeOverflow, SingularJacobian
from jetgalois.geometry import (
    Chart,
    DifferentialForm,
    RationalMap,
    VectorField,
    all_increasing,
    apply_field,
    divergence,
    exterior_derivative,
    hamiltonian_field,
    interior_product,
    lie_bracket,
    lie_derivative_form,
    pullback_field,
    pullback_form,
    wedge,
)

x, u, v, alpha, eps, t, f, g = vars_("x", "u", "v", "alpha", "epsilon", "t", "f", "g")
XUV = Chart(("x", "u", "v"))


def D(chart, name):
    return VectorField.coordinate(chart, name)


def dd(chart, *names):
    return DifferentialForm.basis(chart, *names)


# strategies ----------------------------------------------------------------


@st.composite
def poly_in(draw, names=("x", "u", "v"), max_deg=2, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, max_deg)) for _ in names]
        while sum(exps) > max_deg:
            exps[exps.index(max(exps))] -= 1
        mono = tuple((n, e) for n, e in zip(names, exps) if e)
        terms[mono] = terms.get(mono, 0) + Fraction(draw(st.integers(-4, 4)))
    return RationalFunction(Polynomial(terms))


@st.composite
def fields(draw, chart=XUV, max_deg=2):
    return VectorField(chart, [draw(poly_in(chart.fiber, max_deg)) for _ in chart.fiber])


@st.composite
def forms(draw, chart=XUV):
    k = draw(st.integers(0, chart.m))
    terms = {idx: draw(poly_in(chart.fiber)) for idx in all_increasing(chart.m, k)}
    return DifferentialForm(chart, k, terms)


# examples ------------------------------------------------------------------


def test_apply_field_examples():
    X = pl.field("II")
    assert apply_field(X, v) == 2 * u**3 + x * u + alpha
    assert apply_field(X, 1).is_zero()
    Y = VectorField(XUV, [1, v, 0])
    assert apply_field(Y, u - x * v).is_zero()


def test_lie_bracket_examples():
    C = Chart(("u",))
    assert lie_bracket(D(C, "u"), VectorField(C, [u])) == D(C, "u")
    X = pl.field("II")
    assert lie_bracket(X, X).is_zero()
    assert lie_bracket(VectorField(XUV, [1, v, 0]), D(XUV, "v")) == -D(XUV, "u")


def test_exterior_derivative_examples():
    assert exterior_derivative(DifferentialForm.function(XUV, x * u)) == dd(XUV, "x").scale(u) + dd(XUV, "u").scale(x)
    assert exterior_derivative(dd(XUV, "u")).is_zero()


def test_interior_product_example():
    Fs = RationalFunction.symbol("F")
    C = Chart(("x", "u", "v"), ("F",))
    X = VectorField(C, [1, v, Fs])
    got = interior_product(X, DifferentialForm.volume(C))
    want = dd(C, "u", "v") - v * dd(C, "x", "v") + Fs * dd(C, "x", "u")
    assert got == want


def test_lie_derivative_examples():
    X = pl.field("II")
    assert lie_derivative_form(X, DifferentialForm.volume(X.chart)).is_zero()
    for pid in ("I", "III", "V", "VI"):
        Y = pl.field(pid)
        assert lie_derivative_form(Y, dd(Y.chart, "x")).is_zero()
    C = Chart(("u",))
    assert lie_derivative_form(D(C, "u"), u * dd(C, "u")) == dd(C, "u")


def test_pullback_form_examples():
    src = Chart(("t",), ("epsilon",))
    tgt = Chart(("x",), ("epsilon",))
    phi = RationalMap(src, tgt, {"x": 1 + eps**2 * t, "epsilon": eps})
    assert pullback_form(phi, dd(tgt, "x")) == eps**2 * dd(src, "t")
    w = x * u * dd(XUV, "v", "u") + dd(XUV, "u", "x")
    assert pullback_form(RationalMap.identity(XUV), w) == w


def test_pullback_commutes_with_d():
    src = Chart(("t", "f", "g"), ("epsilon",))
    tgt = Chart(("x", "u", "v"), ("epsilon",))
    phi = RationalMap(src, tgt, {"x": 1 + eps**2 * t, "u": 1 + 2 * eps * f, "v": 2 * g / eps, "epsilon": eps})
    w = DifferentialForm(tgt, 1, {(0,): u * v, (2,): x**2 / u})
    assert pullback_form(phi, exterior_derivative(w)) == exterior_derivative(pullback_form(phi, w))


def test_pullback_field_examples():
    greek = ("alpha", "beta", "gamma", "delta")
    src = Chart(("t", "f", "g"), greek + ("epsilon",))
    tgt = Chart(("x", "u", "v"), greek + ("epsilon",))
    comps = {"x": 1 + eps**2 * t, "u": 1 + 2 * eps * f, "v": 2 * g / eps}
    comps.update({p: RationalFunction.symbol(p) for p in tgt.params})
    phi = RationalMap(src, tgt, comps)
    F3 = pl.spec("III").F
    X = VectorField(tgt, [1, v, F3])
    got = pullback_field(phi, X).scale(eps**2)
    want = VectorField(src, [1, g, eps**3 / 2 * phi.pull(F3)])
    assert got == want

    assert pullback_field(RationalMap.identity(XUV), pl.field("I")) == pl.field("I")

    C = Chart(("u", "v"))
    lin = RationalMap(C, C, {"u": 2 * u, "v": v})
    assert pullback_field(lin, D(C, "u")) == VectorField(C, [Fraction(1, 2), 0])


def test_pullback_singular_jacobian():
    C = Chart(("u", "v"))
    phi = RationalMap(C, C, {"u": u + v, "v": u + v})
    with pytest.raises(SingularJacobian):
        pullback_field(phi, D(C, "u"))


def test_hamiltonian_field_examples():
    X = hamiltonian_field((v**2 + u**2) / 2, XUV)
    assert X == VectorField(XUV, [1, v, -u])
    s = pl.spec("IV")
    XH = hamiltonian_field(s.hamiltonian, s.ham_chart)
    a = RationalFunction.symbol("a")
    assert XH["u"] == 4 * u * v - u**2 - 2 * x * u - 2 * a


def test_divergence_examples():
    X = pl.field("II")
    assert divergence(X, DifferentialForm.volume(X.chart)).is_zero()
    C = Chart(("u",))
    assert divergence(VectorField(C, [u]), dd(C, "u")) == 1


def test_chart_mismatch_and_degree_overflow():
    with pytest.raises(ChartMismatch):
        pl.field("I") + pl.field("II")
    with pytest.raises(DegreeOverflow):
        DifferentialForm(XUV, 4)


# properties ----------------------------------------------------------------


def _transport_lie_derivative(X: VectorField, w: DifferentialForm) -> DifferentialForm:
    """Coefficient-wise formula: differentiate coefficients along X and replace each dy_i by d(X_i)."""
    chart = w.chart
    dX = [DifferentialForm(chart, 1, {(j,): c.diff(s) for j, s in enumerate(chart.fiber)}) for c in X.coeffs]
    out = DifferentialForm(chart, w.degree)
    for idx, c in w.terms.items():
        Xc = sum((X.coeffs[j] * c.diff(s) for j, s in enumerate(chart.fiber)), RationalFunction.constant(0))
        out = out + DifferentialForm(chart, w.degree, {idx: Xc})
        for pos in range(len(idx)):
            term = DifferentialForm.function(chart, c)
            for q, i in enumerate(idx):
                term = wedge(term, dX[i] if q == pos else DifferentialForm(chart, 1, {(i,): 1}))
            out = out + term
    return out


@given(fields(), forms())
def test_cartan_formula_matches_transport(X, w):
    assert lie_derivative_form(X, w) == _transport_lie_derivative(X, w)


@given(forms())
def test_d_squared_is_zero(w):
    assert exterior_derivative(exterior_derivative(w)).is_zero()


@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    if a.degree + b.degree + c.degree > 3:
        return
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(fields(), fields(), fields())
def test_jacobi_and_antisymmetry(X, Y, Z):
    assert lie_bracket(X, Y) == -lie_bracket(Y, X)
    jac = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) + lie_bracket(Z, lie_bracket(X, Y))
    assert jac.is_zero()


@given(fields(max_deg=2))
def test_pullback_then_inverse_returns_field(X):
    phi = RationalMap(XUV, XUV, {"x": x + 1, "u": 2 * u + x, "v": v - u})
    psi = RationalMap(XUV, XUV, {"x": x - 1, "u": (u - x + 1) / 2, "v": v + (u - x + 1) / 2})
    assert phi.compose(psi).components == RationalMap.identity(XUV).components
    assert pullback_field(psi, pullback_field(phi, X)) == X


@given(poly_in(("x", "u", "v"), max_deg=3, max_terms=6))
def test_hamiltonian_fields_are_divergence_free(H):
    X = hamiltonian_field(H, XUV)
    assert divergence(X, DifferentialForm.volume(XUV)).is_zero()
