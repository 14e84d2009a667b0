"""Declarative verification jobs (YAML, schema-validated)."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import jsonschema
import yaml

from .. import painleve as pl
from ..algebra import RationalFunction
from ..geometry import Chart, DifferentialForm, VectorField, apply_field, lie_bracket, lie_derivative_form
from ..integrals import (
    find_fixed_denominator_integrals,
    find_polynomial_integrals,
    fit_dimension_polynomial,
    in_span,
    verify_first_integral,
)
from ..verdict import Verdict
from .context import InputError, catalog_field, prolonged, read_extension
from .grammar import Scope, parse, parse_field, parse_form, parse_function, to_text

RF = RationalFunction
SCHEMA_VERSION = 1

_NAME = {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"}
_NAMES = {"type": "array", "items": _NAME}
_EXPR_MAP = {"type": "object", "additionalProperties": {"type": "string"}}
_EQUATION = {"enum": [p.value for p in pl.PainleveId]}

_CHART = {
    "type": "object",
    "additionalProperties": False,
    "required": ["fiber"],
    "properties": {"fiber": {**_NAMES, "minItems": 1}, "params": _NAMES},
}
_FIELD = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["chart", "expr"],
            "properties": {"chart": {"type": "string"}, "expr": {"type": "string"}},
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["painleve"],
            "properties": {"painleve": _EQUATION, "specialize": _EXPR_MAP},
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["hamiltonian"],
            "properties": {"hamiltonian": _EQUATION, "specialize": _EXPR_MAP},
        },
    ]
}
_FORM = {
    "type": "object",
    "additionalProperties": False,
    "required": ["chart", "expr"],
    "properties": {"chart": {"type": "string"}, "expr": {"type": "string"}},
}


def _args(required: list[str], **props) -> dict:
    return {"type": "object", "additionalProperties": False, "required": required, "properties": props}


_ORDER = {"type": "integer", "minimum": 0}
OP_ARGS = {
    "painleve.verify-volume": _args(["equation"], equation=_EQUATION),
    "painleve.verify-hamiltonian": _args(
        ["equation"], equation=_EQUATION, map=_EXPR_MAP, hamiltonian={"type": "string"}
    ),
    "painleve.derive-param-map": _args(["equation"], equation=_EQUATION, expect_map=_EXPR_MAP),
    "painleve.verify-confluence": _args(["source", "target"], source=_EQUATION, target=_EQUATION),
    "integrals.verify": _args(["field", "expr"], field={"type": "string"}, order=_ORDER, expr={"type": "string"}),
    "integrals.find": _args(
        ["field", "degree", "contains"],
        field={"type": "string"},
        order=_ORDER,
        degree={"type": "integer", "minimum": 0},
        denominator={"type": "string"},
        jmax={"type": "integer", "minimum": 0},
        variables=_NAMES,
        slice=_EXPR_MAP,
        contains={"type": "array", "items": {"type": "string"}},
    ),
    "lie.zero": _args(["field", "target"], field={"type": "string"}, order=_ORDER, target={"type": "string"}),
    "dimpoly.fit": _args(
        ["samples", "coeffs"],
        samples={"type": "array", "minItems": 2, "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
        coeffs={"type": "array", "items": {"type": "integer"}},
    ),
}

JOB_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "tasks"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "extension": {"type": "string"},
        "charts": {"type": "object", "additionalProperties": _CHART},
        "fields": {"type": "object", "additionalProperties": _FIELD},
        "forms": {"type": "object", "additionalProperties": _FORM},
        "tasks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "op", "args", "expect"],
                "properties": {
                    "id": {"type": "string"},
                    "op": {"enum": sorted(OP_ARGS)},
                    "args": {"type": "object"},
                    "expect": {"enum": ["pass", "fail"]},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class TaskResult:
    id: str
    op: str
    expected: str
    verdict: Verdict

    @property
    def outcome(self) -> str:
        return "pass" if self.verdict.ok else "fail"

    @property
    def as_expected(self) -> bool:
        return self.outcome == self.expected

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "op": self.op,
            "expected": self.expected,
            "outcome": self.outcome,
            "as_expected": self.as_expected,
            "identity": self.verdict.detail,
            "residue": None if self.verdict.residue is None else to_text(self.verdict.residue),
        }


def _error_path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def load_job(path: str | Path) -> dict:
    try:
        doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as exc:
        raise InputError(f"{path}: not valid YAML: {exc}") from None
    validate_job(doc)
    return doc


def validate_job(doc) -> None:
    try:
        jsonschema.validate(doc, JOB_SCHEMA)
        for i, task in enumerate(doc["tasks"]):
            try:
                jsonschema.validate(task["args"], OP_ARGS[task["op"]])
            except jsonschema.ValidationError as exc:
                raise InputError(f"tasks/{i}/args/{_error_path(exc)}: {exc.message}") from None
    except jsonschema.ValidationError as exc:
        raise InputError(f"{_error_path(exc)}: {exc.message}") from None
    ids = [t["id"] for t in doc["tasks"]]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        raise InputError(f"duplicate task ids: {dup}")


class _Job:
    def __init__(self, doc: dict):
        self.doc = doc
        self.ext = read_extension(doc.get("extension"))
        self.charts = {k: Chart(tuple(v["fiber"]), tuple(v.get("params", ()))) for k, v in doc.get("charts", {}).items()}
        self._fields: dict = {}

    def chart(self, name: str) -> Chart:
        if name not in self.charts:
            raise InputError(f"undeclared chart {name!r}")
        return self.charts[name]

    def field(self, ref: str, order: int | None = None) -> VectorField:
        key = (ref, order)
        if key not in self._fields:
            self._fields[key] = prolonged(self._base_field(ref), order)
        return self._fields[key]

    def _base_field(self, ref: str) -> VectorField:
        if ref.startswith(("painleve:", "hamiltonian:")):
            return catalog_field(ref, None, self.ext)
        spec = self.doc.get("fields", {}).get(ref)
        if spec is None:
            raise InputError(f"undeclared field {ref!r}")
        if "expr" in spec:
            return parse_field(spec["expr"], Scope(self.chart(spec["chart"]), self.ext))
        kind = "painleve" if "painleve" in spec else "hamiltonian"
        return catalog_field(f"{kind}:{spec[kind]}", spec.get("specialize"), self.ext)

    def scope(self, X: VectorField) -> Scope:
        return Scope(X.chart, self.ext)

    # ops ------------------------------------------------------------------
    def run(self, op: str, args: dict) -> Verdict:
        return getattr(self, "op_" + op.replace(".", "_").replace("-", "_"))(args)

    def op_painleve_verify_volume(self, args) -> Verdict:
        return pl.verify_volume(args["equation"])

    def op_painleve_verify_hamiltonian(self, args) -> Verdict:
        s = pl.spec(args["equation"])
        if s.hamiltonian is None:
            raise InputError(f"P_{s.id.value} has no Hamiltonian")
        pscope = Scope(Chart(s.ham_params or ("a",)), self.ext)
        if "map" in args:
            pm = {k: parse_function(v, pscope) for k, v in args["map"].items()}
        else:
            pm = pl.derive_param_map(s.id).values
        H = None
        if "hamiltonian" in args:
            H = parse_function(args["hamiltonian"], Scope(s.ham_chart, self.ext))
        return pl.verify_hamiltonian(s.id, pm, H)

    def op_painleve_derive_param_map(self, args) -> Verdict:
        s = pl.spec(args["equation"])
        pm = pl.derive_param_map(s.id)
        verdict = pl.verify_hamiltonian(s.id, pm.values)
        if not verdict.ok:
            return verdict
        if "expect_map" in args:
            pscope = Scope(Chart(s.ham_params), self.ext)
            for k, text in sorted(args["expect_map"].items()):
                if k not in pm.values:
                    raise InputError(f"P_{s.id.value} has no parameter {k!r}")
                diff = pm[k] - parse_function(text, pscope)
                if not diff.is_zero():
                    return Verdict(False, diff, f"derived {k} for P_{s.id.value} = {text}")
        return Verdict(True, None, f"derived parameter map for P_{s.id.value} ({'unique' if pm.unique else 'one branch'})")

    def op_painleve_verify_confluence(self, args) -> Verdict:
        return pl.verify_confluence(pl.get_confluence(args["source"], args["target"]))

    def op_integrals_verify(self, args) -> Verdict:
        X = self.field(args["field"], args.get("order"))
        H = parse_function(args["expr"], self.scope(X))
        v = verify_first_integral(X, H)
        label = f"{args['field']}{_order_suffix(args.get('order'))}({args['expr']}) = 0"
        return Verdict(v.ok, v.residue, label)

    def op_integrals_find(self, args) -> Verdict:
        X = self.field(args["field"], args.get("order"))
        scope = self.scope(X)
        sl = {k: parse_function(v, scope) for k, v in args.get("slice", {}).items()}
        if "denominator" in args:
            Q = parse_function(args["denominator"], scope)
            basis = find_fixed_denominator_integrals(
                X, Q, args["degree"], args.get("jmax", 1), args.get("variables"), sl or None
            )
        else:
            basis = find_polynomial_integrals(X, args["degree"], args.get("variables"), sl or None)
        for text in args["contains"]:
            H = parse_function(text, scope)
            if sl:
                H = H.substitute(sl)
            if not in_span(basis.integrals, H, X.chart.fiber if not sl else basis.field.chart.fiber):
                return Verdict(False, H, f"{text} lies in the span of the integrals found")
        return Verdict(True, None, f"{len(basis)} integrals found; all {len(args['contains'])} expected present")

    def op_lie_zero(self, args) -> Verdict:
        X = self.field(args["field"], args.get("order"))
        target = args["target"]
        forms = self.doc.get("forms", {})
        if target in forms:
            spec = forms[target]
            w = parse_form(spec["expr"], Scope(self.chart(spec["chart"]), self.ext))
            if w.chart != X.chart:
                raise InputError(f"form {target!r} and field {args['field']!r} live on different charts")
            lie = lie_derivative_form(X, w)
            residue = RF.constant(0) if lie.is_zero() else next(iter(sorted(lie.terms.items())))[1]
            return Verdict.from_residue(residue, f"L_{args['field']}({target}) = 0")
        value = parse(target, self.scope(X))
        if isinstance(value, VectorField):
            Y = lie_bracket(X, value)
            residue = next((c for c in Y.coeffs if c), RF.constant(0))
        elif isinstance(value, DifferentialForm):
            lie = lie_derivative_form(X, value)
            residue = RF.constant(0) if lie.is_zero() else next(iter(sorted(lie.terms.items())))[1]
        else:
            residue = apply_field(X, value)
        return Verdict.from_residue(residue, f"L_{args['field']}({target}) = 0")

    def op_dimpoly_fit(self, args) -> Verdict:
        fit = fit_dimension_polynomial([tuple(s) for s in args["samples"]])
        want = tuple(args["coeffs"])
        got = fit.coeffs
        ok = got == want
        detail = f"fitted coefficients {list(got)} (type {fit.type}) == {list(want)}"
        return Verdict(ok, None if ok else RF.constant(0), detail)


def _order_suffix(order) -> str:
    return f"[order {order}]" if order else ""


def run_job(doc: dict) -> list[TaskResult]:
    job = _Job(doc)
    results = []
    for task in doc["tasks"]:
        verdict = job.run(task["op"], task["args"])
        results.append(TaskResult(task["id"], task["op"], task["expect"], verdict))
    return results


def render_results(results: list[TaskResult], name: str | None = None) -> str:
    lines = []
    if name:
        lines.append(f"job: {name}")
    for r in results:
        mark = "PASS" if r.as_expected else "FAIL"
        note = "" if r.outcome == "pass" else " (identity does not hold)"
        if r.expected == "fail":
            note = f" (expected {r.expected}, got {r.outcome})"
        lines.append(f"{mark} {r.id}: {r.verdict.detail}{note}")
        if r.verdict.residue is not None and not r.as_expected:
            lines.append(f"  residue: {to_text(r.verdict.residue)}")
    good = sum(r.as_expected for r in results)
    lines.append(f"{good}/{len(results)} tasks as expected")
    return "\n".join(lines)
