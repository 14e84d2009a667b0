"""Command-line entry point.

Exit codes: 0 success, 1 a verification failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import yaml

from .. import painleve as pl
from ..errors import (
    ArityMismatch,
    JetGaloisError,
    ParseError,
    PoleAtZero,
    UnknownSymbol,
)
from ..geometry import (
    Chart,
    DifferentialForm,
    RationalMap,
    VectorField,
    apply_field,
    lie_bracket,
    lie_derivative_form,
    pullback_field,
    pullback_form,
)
from ..integrals import (
    DEFAULT_SEED,
    find_fixed_denominator_integrals,
    find_polynomial_integrals,
    fit_dimension_polynomial,
    integral_rank,
    verify_first_integral,
)
from ..jets import JetContext, aut_dim, frame_dim, gamma_dim, prolong_frame
from ..verdict import Verdict
from . import catalog_io
from .context import InputError, parse_assignments, read_extension, resolve_field
from .grammar import Scope, parse, parse_chart, parse_field, parse_function, to_text
from .jobfile import load_job, render_results, run_job


class _Exit(Exception):
    def __init__(self, code: int):
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse prints usage and exits 2 on its own; keep that contract
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _Exit(2)


def _color(word: str, ok: bool) -> str:
    if os.environ.get("NO_COLOR") or not sys.stdout.isatty():
        return word
    return f"\033[{32 if ok else 31}m{word}\033[0m"


class Output:
    def __init__(self, json_mode: bool):
        self.json_mode = json_mode

    def emit(self, text: str, data) -> None:
        if self.json_mode:
            print(json.dumps(data, sort_keys=True, indent=2))
        else:
            print(text)

    def verdict(self, v: Verdict, extra: dict | None = None) -> int:
        data = {"ok": v.ok, "identity": v.detail, "residue": None if v.ok else to_text(v.residue)}
        data.update(extra or {})
        if self.json_mode:
            print(json.dumps(data, sort_keys=True, indent=2))
        else:
            print(f"{v.detail}: {_color('OK' if v.ok else 'FAIL', v.ok)}")
            if not v.ok and v.residue is not None:
                print(f"residue: {to_text(v.residue)}")
        return 0 if v.ok else 1


# shared argument groups ------------------------------------------------------


def _add_field_args(p: argparse.ArgumentParser, order: bool = True) -> None:
    p.add_argument("--field", required=True, help="field expression, or painleve:ID / hamiltonian:ID")
    p.add_argument("--fiber", help="comma-separated fiber coordinates of an explicit field")
    p.add_argument("--params", default="", help="comma-separated parameters of an explicit field")
    p.add_argument("--extension", help="algebraic generator, e.g. 'rho: rho^6 = 2'")
    p.add_argument("--set", action="append", metavar="NAME=EXPR", help="specialize a parameter")
    if order:
        p.add_argument("--order", type=int, default=0, help="prolong to the order-k frame bundle first")


def _field_from_args(args) -> tuple[VectorField, Scope]:
    ext = read_extension(args.extension)
    chart = parse_chart(args.fiber, args.params) if args.fiber else None
    X = resolve_field(args.field, chart, ext, parse_assignments(args.set))
    order = getattr(args, "order", 0) or 0
    if order < 0:
        raise InputError("--order must be non-negative")
    if order:
        X = prolong_frame(X, JetContext(X.chart, order))
    return X, Scope(X.chart, ext)


# commands ------------------------------------------------------------------------


def cmd_prolong(args, out: Output) -> int:
    X, _ = _field_from_args(args)
    out.emit(to_text(X), {"field": to_text(X), "fiber": list(X.chart.fiber), "params": list(X.chart.params)})
    return 0


def cmd_lie(args, out: Output) -> int:
    X, scope = _field_from_args(args)
    value = parse(args.expr, scope)
    if isinstance(value, VectorField):
        result = lie_bracket(X, value)
        zero = result.is_zero()
    elif isinstance(value, DifferentialForm):
        result = lie_derivative_form(X, value)
        zero = result.is_zero()
    else:
        result = apply_field(X, value)
        zero = result.is_zero()
    text = to_text(result)
    out.emit(text, {"result": text, "zero": zero})
    if args.check_zero and not zero:
        print(f"residue: {text}", file=sys.stderr)
        return 1
    return 0


def cmd_bracket(args, out: Output) -> int:
    X, scope = _field_from_args(args)
    Y = parse_field(args.other, scope)
    text = to_text(lie_bracket(X, Y))
    out.emit(text, {"result": text})
    return 0


def cmd_pullback(args, out: Output) -> int:
    ext = read_extension(args.extension)
    target = parse_chart(args.fiber, args.params)
    source = parse_chart(args.source_fiber, args.source_params)
    sscope = Scope(source, ext)
    comps = {k: parse_function(v, sscope) for k, v in parse_assignments(args.map).items()}
    for p in target.params:
        if p not in comps and p in source.params:
            comps[p] = parse_function(p, sscope)
    phi = RationalMap(source, target, comps)
    value = parse(args.expr, Scope(target, ext))
    if isinstance(value, VectorField):
        result = pullback_field(phi, value)
    elif isinstance(value, DifferentialForm):
        result = pullback_form(phi, value)
    else:
        result = phi.pull(value)
    text = to_text(result)
    out.emit(text, {"result": text})
    return 0


def cmd_integrals_find(args, out: Output) -> int:
    X, scope = _field_from_args(args)
    sl = {k: parse_function(v, scope) for k, v in parse_assignments(args.slice).items()}
    variables = [v.strip() for v in args.vars.split(",")] if args.vars else None
    if args.denominator:
        Q = parse_function(args.denominator, scope)
        basis = find_fixed_denominator_integrals(X, Q, args.degree, args.jmax, variables, sl or None, args.weighted)
    else:
        basis = find_polynomial_integrals(X, args.degree, variables, sl or None, args.weighted)
    texts = [to_text(h) for h in basis.integrals]
    data = {"count": len(texts), "integrals": texts}
    if args.rank:
        data["rank"] = integral_rank(basis, args.seed) if texts else 0
    lines = [f"{len(texts)} first integrals (degree <= {args.degree})"] + [f"  {t}" for t in texts]
    if args.rank:
        lines.append(f"rank: {data['rank']}")
    out.emit("\n".join(lines), data)
    return 0


def cmd_integrals_verify(args, out: Output) -> int:
    X, scope = _field_from_args(args)
    H = parse_function(args.expr, scope)
    v = verify_first_integral(X, H)
    v = Verdict(v.ok, v.residue, f"X({args.expr}) = 0")
    return out.verdict(v)


def _sample(text: str) -> tuple[int, int]:
    k, sep, d = text.partition(":")
    if not sep:
        raise InputError(f"samples are K:DIM, got {text!r}")
    try:
        return int(k), int(d)
    except ValueError:
        raise InputError(f"samples are integer pairs K:DIM, got {text!r}") from None


def cmd_dimpoly_fit(args, out: Output) -> int:
    fit = fit_dimension_polynomial([_sample(s) for s in args.samples], args.max_type)
    data = {"coeffs": list(fit.coeffs), "type": fit.type, "leading": fit.leading, "polynomial": str(fit)}
    text = f"P(k) = {fit}\ncoefficients: {tuple(fit.coeffs)}\ntype: {fit.type}"
    out.emit(text, data)
    return 0


def _k_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise InputError(f"expected a range like 2..6, got {text!r}") from None
    if a < 0 or b < a:
        raise InputError(f"empty or negative range {text!r}")
    return range(a, b + 1)


def cmd_report_dimensions(args, out: Output) -> int:
    if args.m < 1 or args.d < 0:
        raise InputError("need m >= 1 and d >= 0")
    ks = _k_range(args.range)
    rows = [{"k": k, "frame_dim": frame_dim(args.m, args.d, k), "gamma_dim": gamma_dim(args.m, k),
             "aut_dim": aut_dim(args.m, args.d, k)} for k in ks]
    lines = [f"{'k':>3} {'frame_dim':>10} {'gamma_dim':>10} {'aut_dim':>10}"]
    lines += [f"{r['k']:>3} {r['frame_dim']:>10} {r['gamma_dim']:>10} {r['aut_dim']:>10}" for r in rows]
    data: dict = {"m": args.m, "d": args.d, "rows": rows}
    if args.fit:
        fit = fit_dimension_polynomial([(r["k"], r["aut_dim"]) for r in rows])
        data["fit"] = {"coeffs": list(fit.coeffs), "type": fit.type, "polynomial": str(fit)}
        lines.append(f"aut_dim fit: {fit}; coefficients {tuple(fit.coeffs)}, type {fit.type}")
    out.emit("\n".join(lines), data)
    return 0


def cmd_painleve_field(args, out: Output) -> int:
    s = pl.spec(args.id)
    ext = read_extension(args.extension)
    assigns = parse_assignments(args.set)
    if assigns:
        scope = Scope(Chart(pl.FIBER, s.params), ext)
        X = pl.field(s.id, {k: parse_function(v, scope) for k, v in assigns.items()})
    else:
        X = pl.field(s.id)
    text = to_text(X)
    out.emit(text, {"id": s.id.value, "field": text, "params": list(X.chart.params)})
    return 0


def cmd_painleve_verify_volume(args, out: Output) -> int:
    return out.verdict(pl.verify_volume(args.id))


def cmd_painleve_verify_hamiltonian(args, out: Output) -> int:
    s = pl.spec(args.id)
    if s.hamiltonian is None:
        raise InputError(f"P_{s.id.value} has no Hamiltonian")
    ext = read_extension(args.extension)
    assigns = parse_assignments(args.map)
    if assigns:
        pscope = Scope(Chart(s.ham_params), ext)
        pm = {k: parse_function(v, pscope) for k, v in assigns.items()}
    else:
        pm = pl.derive_param_map(s.id).values
    H = parse_function(args.hamiltonian, Scope(s.ham_chart, ext)) if args.hamiltonian else None
    return out.verdict(pl.verify_hamiltonian(s.id, pm, H), {"map": {k: to_text(v) for k, v in pm.items()}})


def cmd_painleve_verify_confluence(args, out: Output) -> int:
    c = pl.get_confluence(args.source, args.target)
    try:
        v = pl.verify_confluence(c)
    except PoleAtZero as exc:
        v = Verdict(False, None, f"Y|_{{epsilon=0}} = X_{c.target.value} ({exc})")
    return out.verdict(v, {"confluence": c.name})


def cmd_painleve_derive_param_map(args, out: Output) -> int:
    pm = pl.derive_param_map(args.id)
    values = {k: to_text(v) for k, v in pm.items()}
    lines = [f"{k} = {v}" for k, v in values.items()]
    lines.append(f"unique: {'yes' if pm.unique else 'no'}")
    out.emit("\n".join(lines), {"id": pm.id.value, "map": values, "unique": pm.unique})
    return 0


def cmd_painleve_export_catalog(args, out: Output) -> int:
    if args.output:
        catalog_io.write_catalog(args.output)
    else:
        sys.stdout.write(catalog_io.catalog_text())
    return 0


def cmd_jobfile_run(args, out: Output) -> int:
    doc = load_job(args.path)
    results = run_job(doc)
    ok = all(r.as_expected for r in results)
    if out.json_mode:
        print(json.dumps({"job": doc.get("name"), "ok": ok, "tasks": [r.to_json() for r in results]},
                         sort_keys=True, indent=2))
    else:
        print(render_results(results, doc.get("name")))
    return 0 if ok else 1


# parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jetgalois", description="Exact checks for prolonged vector fields and Painleve equations.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED, help="seed for random evaluation points")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("prolong", help="prolong a field to the order-k frame bundle")
    _add_field_args(sp)
    sp.set_defaults(func=cmd_prolong)

    sp = sub.add_parser("lie", help="Lie derivative of a function, form or field")
    _add_field_args(sp)
    sp.add_argument("--expr", required=True)
    sp.add_argument("--check-zero", action="store_true", help="exit 1 unless the result is zero")
    sp.set_defaults(func=cmd_lie)

    sp = sub.add_parser("bracket", help="Lie bracket [X, Y]")
    _add_field_args(sp)
    sp.add_argument("--other", required=True)
    sp.set_defaults(func=cmd_bracket)

    sp = sub.add_parser("pullback", help="pull back a function, form or field along a rational map")
    sp.add_argument("--fiber", required=True, help="target fiber coordinates")
    sp.add_argument("--params", default="")
    sp.add_argument("--source-fiber", required=True)
    sp.add_argument("--source-params", default="")
    sp.add_argument("--map", action="append", required=True, metavar="NAME=EXPR")
    sp.add_argument("--extension")
    sp.add_argument("--expr", required=True)
    sp.set_defaults(func=cmd_pullback)

    ip = sub.add_parser("integrals", help="first-integral search and verification")
    isub = ip.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = isub.add_parser("find")
    _add_field_args(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--denominator")
    sp.add_argument("--jmax", type=int, default=1)
    sp.add_argument("--vars", help="restrict candidate monomials to these variables")
    sp.add_argument("--slice", action="append", metavar="NAME=EXPR")
    sp.add_argument("--weighted", action="store_true", help="use jet weights for the degree bound")
    sp.add_argument("--rank", action="store_true", help="also report the rank of the integrals")
    sp.set_defaults(func=cmd_integrals_find)
    sp = isub.add_parser("verify")
    _add_field_args(sp)
    sp.add_argument("--expr", required=True)
    sp.set_defaults(func=cmd_integrals_verify)

    dp = sub.add_parser("dimpoly", help="dimension polynomials")
    dsub = dp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = dsub.add_parser("fit")
    sp.add_argument("samples", nargs="+", metavar="K:DIM")
    sp.add_argument("--max-type", type=int)
    sp.set_defaults(func=cmd_dimpoly_fit)

    sp = sub.add_parser("report-dimensions", help="frame, jet-group and Aut dimensions per order")
    sp.add_argument("m", type=int)
    sp.add_argument("d", type=int)
    sp.add_argument("range", metavar="K0..K1")
    sp.add_argument("--fit", action="store_true")
    sp.set_defaults(func=cmd_report_dimensions)

    pp = sub.add_parser("painleve", help="the Painleve catalog")
    psub = pp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = psub.add_parser("field")
    sp.add_argument("id")
    sp.add_argument("--set", action="append", metavar="NAME=EXPR")
    sp.add_argument("--extension")
    sp.set_defaults(func=cmd_painleve_field)
    sp = psub.add_parser("verify-volume")
    sp.add_argument("id")
    sp.set_defaults(func=cmd_painleve_verify_volume)
    sp = psub.add_parser("verify-hamiltonian")
    sp.add_argument("id")
    sp.add_argument("--map", action="append", metavar="NAME=EXPR", help="parameter map (default: derived)")
    sp.add_argument("--hamiltonian", help="override the catalog Hamiltonian")
    sp.add_argument("--extension")
    sp.set_defaults(func=cmd_painleve_verify_hamiltonian)
    sp = psub.add_parser("verify-confluence")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.set_defaults(func=cmd_painleve_verify_confluence)
    sp = psub.add_parser("derive-param-map")
    sp.add_argument("id")
    sp.set_defaults(func=cmd_painleve_derive_param_map)
    sp = psub.add_parser("export-catalog", help="write the catalog fixture in the expression grammar")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_painleve_export_catalog)

    jp = sub.add_parser("jobfile", help="declarative verification jobs")
    jsub = jp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = jsub.add_parser("run")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_jobfile_run)
    return p


_INPUT_ERRORS = (InputError, ParseError, UnknownSymbol, ArityMismatch, OSError, yaml.YAMLError)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = Output(args.json)
        return args.func(args, out)
    except _Exit as exc:
        return exc.code
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except JetGaloisError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
