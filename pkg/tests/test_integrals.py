from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

import oracles
from jetgalois import painleve as pl
from jetgalois.algebra import RationalFunction, vars_
from jetgalois.errors import DenominatorVanishes, NoPolynomialFit, NonIntegerCoefficients, SliceNotInvariant, ZeroDenominator
from jetgalois.geometry import Chart, VectorField
from jetgalois.integrals import (
    DimensionPolynomial,
    find_fixed_denominator_integrals,
    find_polynomial_integrals,
    fit_dimension_polynomial,
    in_span,
    integral_rank,
    restrict_to_slice,
    span_rank,
    specialize_integral,
    verify_first_integral,
)
from jetgalois.jets import JetContext, aut_dim, jet_name, prolong_frame
from systems import LinearSystem, free_particle

x, u, v, alpha = vars_("x", "u", "v", "alpha")
XUV = Chart(("x", "u", "v"))


def J(name):
    return RationalFunction.symbol(name)


# polynomial search ---------------------------------------------------------------


def test_free_particle_degree_two():
    X = free_particle()
    basis = find_polynomial_integrals(X, 2)
    assert len(basis) == 4
    for H in (RationalFunction.constant(1), v, v**2, u - x * v):
        assert in_span(basis.integrals, H, XUV.fiber)


@pytest.mark.parametrize("D", [1, 2, 3])
def test_free_particle_matches_brute_force(D):
    X = free_particle()
    basis = find_polynomial_integrals(X, D)
    ref = oracles.polynomial_integrals({"x": sp.Integer(1), "u": oracles.v, "v": sp.Integer(0)}, ["x", "u", "v"], D)
    assert len(basis) == len(ref)
    for expr in ref:
        H = _from_sympy(expr)
        assert in_span(basis.integrals, H, XUV.fiber)


def _from_sympy(expr) -> RationalFunction:
    out = RationalFunction.constant(0)
    for mono, c in sp.Poly(expr, oracles.x, oracles.u, oracles.v).terms():
        term = RationalFunction.constant(Fraction(int(c.p), int(c.q)))
        for name, e in zip(("x", "u", "v"), mono):
            term = term * RationalFunction.symbol(name) ** e
        out = out + term
    return out


def test_coordinate_field_integrals_are_free_in_other_variables():
    X = VectorField.coordinate(XUV, "x")
    basis = find_polynomial_integrals(X, 3)
    assert len(basis) == comb(2 + 3, 2)
    assert all("x" not in H.variables() for H in basis)


def test_prolonged_p2_has_base_jets_as_integrals():
    X = pl.field("II")
    R1 = prolong_frame(X, JetContext(X.chart, 1))
    xs = [jet_name("x", a) for a in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    basis = find_polynomial_integrals(R1, 1, variables=xs)
    for name in xs:
        assert in_span(basis.integrals, J(name), R1.chart.fiber)


# fixed denominator --------------------------------------------------------------


def test_fixed_denominator_with_unit_denominator_is_polynomial_search():
    X = free_particle()
    a = find_fixed_denominator_integrals(X, 1, 2, 1)
    b = find_polynomial_integrals(X, 2)
    assert span_rank(a.integrals, XUV.fiber) == span_rank(b.integrals, XUV.fiber) == len(a)
    assert all(in_span(b.integrals, H, XUV.fiber) for H in a)


def test_fixed_denominator_scaling_field():
    C = Chart(("u", "v"))
    X = VectorField(C, [u, -v])
    basis = find_fixed_denominator_integrals(X, v, 1, 1)
    assert span_rank(basis.integrals, C.fiber) == len(basis)
    assert not verify_first_integral(X, u / v)
    assert not in_span(basis.integrals, u / v, C.fiber)
    # uv has degree 2, so with D = 1 only the constant is found and j = 1 adds nothing
    assert len(basis) == 1
    bigger = find_fixed_denominator_integrals(X, v, 2, 1)
    assert in_span(bigger.integrals, u * v, C.fiber)
    assert len(bigger) == 2


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        find_fixed_denominator_integrals(free_particle(), 0, 1, 1)


def test_linear_system_entries_found():
    sys_ = LinearSystem()
    basis = find_fixed_denominator_integrals(sys_.R1, sys_.denominator(), 2, 1, slice=sys_.slice)
    fiber = basis.field.chart.fiber
    for H in sys_.two_entries():
        assert verify_first_integral(basis.field, H)
        assert in_span(basis.integrals, H, fiber)
    for H in basis:
        assert verify_first_integral(basis.field, H)


def test_slice_must_be_invariant():
    X = free_particle()
    with pytest.raises(SliceNotInvariant):
        restrict_to_slice(X, {"u": 0})
    Y = restrict_to_slice(X, {"v": 0})
    assert Y.chart.fiber == ("x", "u")


# verification and rank ----------------------------------------------------------


def test_verify_examples():
    X = pl.field("II")
    ctx = JetContext(X.chart, 1)
    assert verify_first_integral(prolong_frame(X, ctx), RationalFunction(ctx.jacobian()))
    verdict = verify_first_integral(X, u)
    assert not verdict and verdict.residue == v
    assert verify_first_integral(X, 5)


def test_rank_examples():
    X = free_particle()
    basis = find_polynomial_integrals(X, 2)
    assert integral_rank(basis) == 2
    assert integral_rank([RationalFunction.constant(1)], chart=XUV) == 0


def test_rank_is_seed_independent_and_monotone():
    X = free_particle()
    basis = find_polynomial_integrals(X, 2)
    assert integral_rank(basis, seed=1) == integral_rank(basis, seed=2)
    assert integral_rank([v], chart=XUV) <= integral_rank([v, u - x * v], chart=XUV)


# dimension polynomials ---------------------------------------------------------


def test_fit_examples():
    P = fit_dimension_polynomial([(k, aut_dim(2, 0, k)) for k in range(2, 7)])
    assert P.coeffs == (2, 0, 2) and P.type == 2
    P = fit_dimension_polynomial([(k, 7) for k in range(3)])
    assert P.coeffs == (7,) and P.type == 0
    P = fit_dimension_polynomial([(k, 2 * comb(k + 2, 2) + 4) for k in range(2, 7)])
    assert P.type == 2 and P.leading == 2
    assert str(P) == "2*C(k+2,2) + 4"


def test_fit_errors():
    with pytest.raises(NoPolynomialFit):
        fit_dimension_polynomial([(1, 2)])
    with pytest.raises(NoPolynomialFit):
        fit_dimension_polynomial([(0, 0), (1, 1), (2, 5)], max_type=1)
    with pytest.raises(NonIntegerCoefficients):
        fit_dimension_polynomial([(0, 0), (2, 1)])


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.integers(0, 3))
def test_fit_recovers_polynomial(coeffs, start):
    if coeffs[-1] == 0:
        coeffs[-1] = 1
    P = DimensionPolynomial(tuple(coeffs))
    samples = [(k, P(k)) for k in range(start, start + len(coeffs) + 2)]
    fitted = fit_dimension_polynomial(samples)
    assert [fitted(k) for k, _ in samples] == [d for _, d in samples]
    assert fitted.coeffs == P.coeffs


# specialization ---------------------------------------------------------------


def test_specialize_examples():
    X = pl.field("II")
    R1 = prolong_frame(X, JetContext(X.chart, 1))
    basis = find_polynomial_integrals(R1, 1)
    X0 = pl.field("II", {"alpha": 0})
    R0 = prolong_frame(X0, JetContext(X0.chart, 1))
    for H in basis:
        assert verify_first_integral(R0, specialize_integral(H, {"alpha": 0}))
    assert specialize_integral(u * v, {}) == u * v
    with pytest.raises(DenominatorVanishes):
        specialize_integral(1 / alpha, {"alpha": 0})
