from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from jetgalois import painleve as pl
from jetgalois.algebra import RationalFunction, vars_
from jetgalois.errors import ArityMismatch
from jetgalois.geometry import DifferentialForm, divergence
from jetgalois.integrals import verify_first_integral
from jetgalois.jets import JetContext, jet_name, prolong_frame

x, u, v, a, b, t, f, g = vars_("x", "u", "v", "a", "b", "t", "f", "g")
HAMILTONIAN_IDS = ("III", "IV", "V", "VI")


def J(name):
    return RationalFunction.symbol(name)


# catalog ------------------------------------------------------------------------


def test_field_examples():
    X = pl.field("I")
    assert X.coeffs == (1, v, 6 * u**2 + x)
    assert pl.field("II", {"alpha": 0})["v"] == 2 * u**3 + x * u
    F6 = pl.field("VI")["v"]
    allowed = x**2 * (x - 1) ** 2 * u**2 * (u - 1) ** 2 * (u - x) ** 2
    assert (allowed / F6.den).is_polynomial()


@pytest.mark.parametrize("pid", ["I", "II", "III", "IV", "V", "VI"])
def test_catalog_matches_oracle(pid):
    assert oracles.same(pl.spec(pid).F, oracles.F[pid])
    if pid in HAMILTONIAN_IDS:
        assert oracles.same(pl.spec(pid).hamiltonian, oracles.H[pid])


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        pl.field("II", {"alpha": 0, "beta": 1})
    with pytest.raises(ArityMismatch):
        pl.field("IV", {"alpha": 0})
    with pytest.raises(ArityMismatch):
        pl.verify_hamiltonian("IV", {"alpha": 0})


def test_parse_id():
    assert pl.PainleveId.parse("p_iv") is pl.PainleveId.IV
    assert pl.PainleveId.parse(4) is pl.PainleveId.IV


# volume -------------------------------------------------------------------------


@pytest.mark.parametrize("pid", ["I", "II", "III", "IV", "V", "VI"])
def test_volume_preserved(pid):
    verdict = pl.verify_volume(pid)
    assert verdict, verdict.detail


def test_volume_is_not_vacuous():
    X = pl.field("IV")
    assert not divergence(X, DifferentialForm.volume(X.chart)).is_zero()


@pytest.mark.parametrize("value", [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(7)])
def test_p2_specializations_keep_volume_and_integrals(value):
    X = pl.field("II", {"alpha": value})
    assert divergence(X, DifferentialForm.volume(X.chart)).is_zero()
    ctx = JetContext(X.chart, 1)
    R1 = prolong_frame(X, ctx)
    candidates = [J(jet_name("x", e)) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))] + [RationalFunction(ctx.jacobian())]
    for H in candidates:
        assert verify_first_integral(R1, H)


# Hamiltonian identity -------------------------------------------------------------


def test_hamiltonian_examples():
    assert pl.verify_hamiltonian("IV", {"alpha": 2 * b - a + 1, "beta": -2 * a**2})
    bad = pl.verify_hamiltonian("IV", {"alpha": 0, "beta": 0})
    assert not bad and not bad.residue.is_zero()
    assert pl.verify_hamiltonian("III", pl.derive_param_map("III"))


def test_param_map_iv_shape():
    pm = pl.derive_param_map("IV")
    assert pm["beta"] == -2 * a**2
    assert pm["alpha"].is_polynomial() and pm["alpha"].as_polynomial().total_degree() == 1


@pytest.mark.parametrize("pid", HAMILTONIAN_IDS)
def test_param_map_matches_sympy_oracle(pid):
    pm = pl.derive_param_map(pid)
    assert pm.unique
    ref = oracles.param_map(pid)
    assert {str(k) for k in ref} == set(pm.keys())
    for k, expr in ref.items():
        assert oracles.same(pm[str(k)], expr)
    assert oracles.hamiltonian_residue(pid, ref) == 0


@pytest.mark.parametrize("pid", HAMILTONIAN_IDS)
def test_hamiltonian_round_trip_and_perturbation(pid):
    pm = pl.derive_param_map(pid)
    assert pl.verify_hamiltonian(pid, pm)
    for key in pm.keys():
        shifted = dict(pm.items())
        shifted[key] = shifted[key] + 1
        assert not pl.verify_hamiltonian(pid, shifted)


def test_corrupted_hamiltonian_is_reported():
    s = pl.spec("IV")
    verdict = pl.verify_hamiltonian("IV", pl.derive_param_map("IV"), s.hamiltonian + 2 * b * u)
    assert not verdict
    assert verdict.residue == -8 * b * u
    assert "P_IV" in verdict.detail


# confluences --------------------------------------------------------------------


def test_confluence_catalog():
    assert [c.name for c in pl.confluences()] == ["III->II", "IV->II", "V->IV", "VI->V"]
    with pytest.raises(ArityMismatch):
        pl.get_confluence("II", "I")


def test_confluence_field_examples():
    Y = pl.confluence_field(pl.get_confluence("III", "II"))
    assert Y["t"] == 1
    c = pl.get_confluence("VI", "V")
    eps = RationalFunction.symbol("epsilon")
    assert c.scale == eps
    assert c.fiber_map == {"x": 1 + eps * t, "u": f, "v": g / eps}
    assert pl.confluence_field(pl.get_confluence("V", "IV"))["f"] == g


@pytest.mark.parametrize("pair", [("III", "II"), ("IV", "II"), ("V", "IV"), ("VI", "V")])
def test_confluence_verifies(pair):
    verdict = pl.verify_confluence(pl.get_confluence(*pair))
    assert verdict, verdict.detail


def test_confluence_iii_ii_limit():
    Y = pl.confluence_field(pl.get_confluence("III", "II"))
    assert Y["g"].evaluate({"epsilon": Fraction(0)}) == 2 * f**3 + t * f + a


@pytest.mark.parametrize("pair", [("III", "II"), ("IV", "II"), ("V", "IV"), ("VI", "V")])
def test_confluence_limit_matches_sympy_oracle(pair):
    limit, target = oracles.confluence_limit(*pair)
    for got, want in zip(limit, target):
        assert oracles.sp.simplify(got - want) == 0
    Y = pl.confluence_field(pl.get_confluence(*pair))
    for coef, want in zip(Y.coeffs, limit):
        assert oracles.same(coef.evaluate({"epsilon": Fraction(0)}), want)


def test_confluence_detects_wrong_scale():
    c = pl.get_confluence("III", "II")
    eps = RationalFunction.symbol("epsilon")
    broken = pl.Confluence(c.source, c.target, c.residual, c.fiber_map, c.param_map, eps**2 * 2)
    assert not pl.verify_confluence(broken)
