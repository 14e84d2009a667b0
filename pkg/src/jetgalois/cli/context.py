"""Resolving field, form and chart references shared by commands and job files."""

from __future__ import annotations

from typing import Mapping

from .. import painleve as pl
from ..algebra import Extension
from ..geometry import Chart, DifferentialForm, VectorField, hamiltonian_field
from ..jets import JetContext, prolong_frame
from .grammar import Scope, parse_extension, parse_field, parse_form, parse_function


class InputError(ValueError):
    """Malformed command-line or job-file input (exit code 2)."""


def catalog_field(ref: str, specialization: Mapping[str, str] | None = None,
                  extension: Extension | None = None) -> VectorField:
    """``painleve:II`` or ``hamiltonian:IV``, optionally specialized."""
    kind, _, ident = ref.partition(":")
    if kind == "painleve":
        if not specialization:
            return pl.field(ident)
        s = pl.spec(ident)
        scope = Scope(Chart(pl.FIBER, s.params), extension)
        values = {k: parse_function(v, scope) for k, v in specialization.items()}
        return pl.field(ident, values)
    if kind == "hamiltonian":
        s = pl.spec(ident)
        if s.hamiltonian is None:
            raise InputError(f"P_{s.id.value} has no Hamiltonian")
        X = hamiltonian_field(s.hamiltonian, s.ham_chart)
        if specialization:
            scope = Scope(s.ham_chart, extension)
            X = X.substitute({k: parse_function(v, scope) for k, v in specialization.items()})
            X = VectorField(Chart(pl.FIBER, tuple(p for p in s.ham_params if p not in specialization)), X.coeffs)
        return X
    raise InputError(f"unknown field reference {ref!r}; expected painleve:ID or hamiltonian:ID")


def is_catalog_ref(text: str) -> bool:
    return text.startswith(("painleve:", "hamiltonian:"))


def resolve_field(text: str, chart: Chart | None, extension: Extension | None = None,
                  specialization: Mapping[str, str] | None = None) -> VectorField:
    if is_catalog_ref(text):
        return catalog_field(text, specialization, extension)
    if chart is None:
        raise InputError("an explicit field needs --fiber (and --params) to declare its chart")
    X = parse_field(text, Scope(chart, extension))
    if specialization:
        scope = Scope(chart, extension)
        X = X.substitute({k: parse_function(v, scope) for k, v in specialization.items()})
        X = VectorField(Chart(chart.fiber, tuple(p for p in chart.params if p not in specialization)), X.coeffs)
    return X


def prolonged(X: VectorField, order: int | None) -> VectorField:
    if not order:
        return X
    return prolong_frame(X, JetContext(X.chart, order))


def scope_for(X: VectorField, extension: Extension | None = None) -> Scope:
    return Scope(X.chart, extension)


def read_extension(text: str | None) -> Extension | None:
    return parse_extension(text) if text else None


def form_from_text(text: str, chart: Chart, extension: Extension | None = None) -> DifferentialForm:
    return parse_form(text, Scope(chart, extension))


def parse_assignments(items) -> dict[str, str]:
    """``['alpha=0', 'beta=1/2']`` -> ``{'alpha': '0', 'beta': '1/2'}``."""
    out: dict[str, str] = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"expected NAME=EXPR, got {item!r}")
        out[name.strip()] = value.strip()
    return out
