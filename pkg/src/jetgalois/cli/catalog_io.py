"""Serialized Painlevé catalog: the checked-in fixture and its regeneration."""

from __future__ import annotations

from pathlib import Path

import yaml

from .. import painleve as pl
from ..geometry import Chart
from .grammar import Scope, extension_text, parse_extension, parse_function, to_text

FIXTURE = Path(__file__).resolve().parent.parent / "data" / "painleve_catalog.yaml"

HEADER = "# Painleve catalog in the expression grammar.\n# Regenerate with: jetgalois painleve export-catalog --output <path>\n"


def catalog_document() -> dict:
    """Plain data for the catalog, every expression in canonical text."""
    equations = {}
    for pid, s in pl.catalog().items():
        entry = {"params": list(s.params), "F": to_text(s.F)}
        if s.hamiltonian is not None:
            pm = pl.derive_param_map(pid)
            entry["hamiltonian_params"] = list(s.ham_params)
            entry["hamiltonian"] = to_text(s.hamiltonian)
            entry["param_map"] = {k: to_text(v) for k, v in pm.items()}
            entry["param_map_unique"] = pm.unique
        equations[pid.value] = entry
    confluences = []
    for c in pl.confluences():
        confluences.append(
            {
                "source": c.source.value,
                "target": c.target.value,
                "residual_params": list(c.residual),
                "fiber_map": {k: to_text(v) for k, v in c.fiber_map.items()},
                "param_map": {k: to_text(v) for k, v in c.param_map.items()},
                "scale": to_text(c.scale),
            }
        )
    return {
        "schema_version": 1,
        "extension": extension_text(pl.RHO),
        "equations": equations,
        "confluences": confluences,
    }


def catalog_text() -> str:
    body = yaml.safe_dump(catalog_document(), sort_keys=False, width=10_000, allow_unicode=False)
    return HEADER + body


def write_catalog(path: str | Path = FIXTURE) -> Path:
    path = Path(path)
    path.write_text(catalog_text(), encoding="utf-8")
    return path


def load_catalog(path: str | Path = FIXTURE) -> dict:
    """Parse a catalog file back into rational functions, keyed like catalog_document."""
    doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    ext = parse_extension(doc["extension"])
    fiber = pl.FIBER
    equations = {}
    for pid, entry in doc["equations"].items():
        scope = Scope(Chart(fiber, tuple(entry["params"])), ext)
        out = {"params": tuple(entry["params"]), "F": parse_function(entry["F"], scope)}
        if "hamiltonian" in entry:
            hp = tuple(entry["hamiltonian_params"])
            hscope = Scope(Chart(fiber, hp), ext)
            out["hamiltonian"] = parse_function(entry["hamiltonian"], hscope)
            out["param_map"] = {k: parse_function(v, Scope(Chart(hp), ext)) for k, v in entry["param_map"].items()}
        equations[pid] = out
    confluences = []
    for entry in doc["confluences"]:
        params = tuple(entry["residual_params"]) + ("epsilon",)
        scope = Scope(Chart(("t", "f", "g"), params), ext)
        pscope = Scope(Chart(params), ext)
        confluences.append(
            {
                "source": entry["source"],
                "target": entry["target"],
                "fiber_map": {k: parse_function(v, scope) for k, v in entry["fiber_map"].items()},
                "param_map": {k: parse_function(v, pscope) for k, v in entry["param_map"].items()},
                "scale": parse_function(entry["scale"], pscope),
            }
        )
    return {"equations": equations, "confluences": confluences}
