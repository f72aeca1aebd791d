"""SPARQL JSON results encoding (shared by the HTTP endpoint and the CLI)."""

from __future__ import annotations

from ..terms import XSD_STRING, Term
from .eval import SolutionSequence


def term_to_json(term: Term) -> dict:
    if term.kind == "iri":
        return {"type": "uri", "value": term.value}
    if term.kind == "blank":
        return {"type": "bnode", "value": term.value[2:]}
    out = {"type": "literal", "value": term.value}
    if term.datatype != XSD_STRING:
        out["datatype"] = term.datatype
    return out


def solutions_to_json(solutions: SolutionSequence) -> dict:
    bindings = [
        {var: term_to_json(term) for var, term in row.items()} for row in solutions.rows
    ]
    return {"head": {"vars": list(solutions.variables)}, "results": {"bindings": bindings}}
