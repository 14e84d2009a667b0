"""Independent reference computations in sympy.

Nothing here calls the package's algebra; package objects are only read
structurally (terms and coefficients) when they need to be compared.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

import sympy as sp

from jetgalois.algebra import AlgebraicNumber, Polynomial, RationalFunction

RHO = sp.Rational(2) ** sp.Rational(1, 6)


def sym(name: str) -> sp.Symbol:
    return sp.Symbol(name)


def scalar_to_sympy(c) -> sp.Expr:
    if isinstance(c, AlgebraicNumber):
        return sum((sp.Rational(q.numerator, q.denominator) * RHO**i for i, q in enumerate(c.coeffs)), sp.Integer(0))
    c = Fraction(c)
    return sp.Rational(c.numerator, c.denominator)


def poly_to_sympy(p: Polynomial) -> sp.Expr:
    out = sp.Integer(0)
    for mono, c in p.terms.items():
        term = scalar_to_sympy(c)
        for name, e in mono:
            term *= sym(name) ** e
        out += term
    return out


def to_sympy(f) -> sp.Expr:
    f = RationalFunction.coerce(f)
    return poly_to_sympy(f.num) / poly_to_sympy(f.den)


def same(f, expr: sp.Expr) -> bool:
    """Exact equality of a package rational function and a sympy expression."""
    return sp.simplify(sp.radsimp(sp.together(to_sympy(f) - expr))) == 0


# catalog, typed out again in sympy ---------------------------------------------

x, u, v = sp.symbols("x u v")
alpha, beta, gamma, delta = sp.symbols("alpha beta gamma delta")
a, b, c, d = sp.symbols("a b c d")
t, f, g, eps = sp.symbols("t f g epsilon")
R = sp.Rational

F = {
    "I": 6 * u**2 + x,
    "II": 2 * u**3 + x * u + alpha,
    "III": v**2 / u - v / x + (alpha * u**2 + beta) / x + gamma * u**3 + delta / u,
    "IV": v**2 / (2 * u) + R(3, 2) * u**3 + 4 * x * u**2 + 2 * (x**2 - alpha) * u + beta / u,
    "V": (1 / (2 * u) + 1 / (u - 1)) * v**2 - v / x
    + (u - 1) ** 2 / x**2 * (alpha * u + beta / u) + gamma * u / x + delta * u * (u + 1) / (u - 1),
    "VI": R(1, 2) * (1 / u + 1 / (u - 1) + 1 / (u - x)) * v**2
    - (1 / x + 1 / (x - 1) + 1 / (u - x)) * v
    + u * (u - 1) * (u - x) / (x**2 * (x - 1) ** 2)
    * (alpha + beta * x / u**2 + gamma * (x - 1) / (u - 1) ** 2 + delta * x * (x - 1) / (u - x) ** 2),
}
GREEK = {"I": (), "II": (alpha,), "III": (alpha, beta, gamma, delta), "IV": (alpha, beta),
         "V": (alpha, beta, gamma, delta), "VI": (alpha, beta, gamma, delta)}
H = {
    "III": (2 * u**2 * v**2 - (2 * a * x * u**2 + (2 * b + 1) * u - 2 * c * x) * v + a * (b + d) * x * u) / x,
    "IV": 2 * u * v**2 - (u**2 + 2 * x * u + 2 * a) * v + b * u,
    "V": (u * (u - 1) ** 2 * v**2 - (a * (u - 1) ** 2 + b * u * (u - 1) - c * x * u) * v
          + R(1, 4) * ((a + b) ** 2 - d**2) * (u - 1)) / x,
    "VI": (u * (u - 1) * (u - x) * v**2
           - (a * (u - 1) * (u - x) + b * u * (u - x) + (c - 1) * u * (u - 1)) * v
           + R(1, 4) * ((a + b + c - 1) ** 2 - d**2) * (u - x)) / (x * (x - 1)),
}


def hamiltonian_residue(pid: str, values: dict, ham: sp.Expr | None = None) -> sp.Expr:
    Hj = H[pid] if ham is None else ham
    Hv = sp.diff(Hj, v)
    lhs = sp.diff(Hv, x) + Hv * sp.diff(Hv, u) - sp.diff(Hj, u) * sp.diff(Hv, v)
    rhs = F[pid].subs(values, simultaneous=True).subs(v, Hv)
    return sp.simplify(sp.together(lhs - rhs))


def param_map(pid: str) -> dict:
    """Solve the conjugation identity for the Greek parameters by undetermined coefficients."""
    greek = GREEK[pid]
    Hv = sp.diff(H[pid], v)
    lhs = sp.diff(Hv, x) + Hv * sp.diff(Hv, u) - sp.diff(H[pid], u) * sp.diff(Hv, v)
    num = sp.numer(sp.together(lhs - F[pid].subs(v, Hv)))
    eqs = sp.Poly(sp.expand(num), x, u, v).coeffs()
    sol = sp.solve(eqs, greek, dict=True)
    assert len(sol) == 1, sol
    return sol[0]


# confluence ----------------------------------------------------------------------

CONFLUENCE = {
    ("III", "II"): (
        {x: 1 + eps**2 * t, u: 1 + 2 * eps * f, v: 2 * g / eps},
        {alpha: -1 / (2 * eps**6), beta: 2 * a / eps**3 + 1 / (2 * eps**6),
         gamma: 1 / (4 * eps**6), delta: -1 / (4 * eps**6)},
        eps**2,
        {alpha: a},
    ),
    ("IV", "II"): (
        {x: eps * t / 2 ** R(2, 3) - 1 / eps**3, u: 2 ** R(2, 3) * f / eps + 1 / eps**3,
         v: 2 ** R(4, 3) * g / eps**2},
        {alpha: -2 * a - 1 / (2 * eps**6), beta: -1 / (2 * eps**12)},
        eps / 2 ** R(2, 3),
        {alpha: a},
    ),
    ("V", "IV"): (
        {x: 1 + eps * sp.sqrt(2) * t, u: eps * f / sp.sqrt(2), v: g / 2},
        {alpha: 1 / (2 * eps**4), beta: b / 4, gamma: -1 / eps**4, delta: a / eps**2 - 1 / (2 * eps**4)},
        eps * sp.sqrt(2),
        {alpha: a, beta: b},
    ),
    ("VI", "V"): (
        {x: 1 + eps * t, u: f, v: g / eps},
        {alpha: a, beta: b, gamma: -d / eps**2 + c / eps, delta: d / eps**2},
        eps,
        {alpha: a, beta: b, gamma: c, delta: d},
    ),
}


def confluence_limit(source: str, target: str) -> tuple[list, list]:
    """(limit of the rescaled pulled-back field at eps=0, target field in (t, f, g))."""
    fmap, pmap, scale, rename = CONFLUENCE[(source, target)]
    X = [sp.Integer(1), v, F[source]]
    X = [e.subs(pmap, simultaneous=True).subs(fmap, simultaneous=True) for e in X]
    J = sp.Matrix([[sp.diff(fmap[y], s) for s in (t, f, g)] for y in (x, u, v)])
    Y = J.inv() * sp.Matrix(X) * scale
    lim = [sp.limit(sp.radsimp(sp.cancel(sp.expand(e))), eps, 0) for e in Y]
    tgt = [sp.Integer(1), v, F[target].subs(rename, simultaneous=True)]
    tgt = [e.subs({x: t, u: f, v: g}, simultaneous=True) for e in tgt]
    return lim, tgt


# first-integral brute force ------------------------------------------------------


def polynomial_integrals(field: dict, names: list[str], D: int) -> list[sp.Expr]:
    """Nullspace of the map P -> X(P) on all monomials of degree <= D, by undetermined coefficients."""
    syms = [sym(n) for n in names]
    monos = [sp.Integer(1)]
    for k in range(1, D + 1):
        monos += [sp.Mul(*c) for c in combinations_with_replacement(syms, k)]
    cs = sp.symbols(f"k0:{len(monos)}")
    P = sum(ci * m for ci, m in zip(cs, monos))
    XP = sp.expand(sum(sp.diff(P, sym(n)) * e for n, e in field.items()))
    eqs = sp.Poly(XP, *syms).coeffs() if XP != 0 else []
    if eqs:
        M = sp.Matrix([[sp.diff(e, ci) for ci in cs] for e in eqs])
        kernel = M.nullspace()
    else:
        kernel = [sp.Matrix([1 if i == j else 0 for i in range(len(cs))]) for j in range(len(cs))]
    return [sp.expand(sum(vec[i] * monos[i] for i in range(len(monos)))) for vec in kernel]


# jets ----------------------------------------------------------------------------


def _jet(base: str, alpha: tuple) -> sp.Symbol:
    return sym(f"{base}[{','.join(map(str, alpha))}]")


def total_derivative(expr: sp.Expr, i: int, fiber: list[str], m: int) -> sp.Expr:
    """Directional total derivative (i in 0..m-1) by chain rule over the symbols present."""
    out = sp.Integer(0)
    for s in expr.free_symbols:
        n = s.name
        if n in fiber:
            base, al = n, (0,) * m
        elif "[" in n:
            base, rest = n.split("[")
            al = tuple(int(k) for k in rest[:-1].split(","))
        else:
            continue
        raised = tuple(k + (1 if j == i else 0) for j, k in enumerate(al))
        out += sp.diff(expr, s) * _jet(base, raised)
    return out


def prolong_order1(field: dict, fiber: list[str]) -> dict:
    """R_1 X: components on y and on y^{1_i} = d_i(X(y))."""
    m = len(fiber)
    out = dict(field)
    for y in fiber:
        for i in range(m):
            out[_jet(y, tuple(1 if j == i else 0 for j in range(m))).name] = total_derivative(field[y], i, fiber, m)
    return out
