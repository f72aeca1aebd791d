"""RDF atoms: IRIs, typed literals, blank nodes, and triples.

Terms are immutable and validated on construction, so anything that made it
into a store is well-formed. Literals always carry a datatype (xsd:string by
default); language tags and named graphs are deliberately unsupported.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"

NUMERIC_DATATYPES = frozenset({XSD_INTEGER, XSD_DECIMAL, XSD_DOUBLE})

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*:")
_BLANK_RE = re.compile(r"^_:[A-Za-z0-9]+$")


class TermError(ValueError):
    """A term violates its invariants; `field` names the offending part."""

    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True, slots=True)
class Term:
    kind: str  # "iri" | "blank" | "literal"
    value: str
    datatype: str | None = None  # literals only

    def __post_init__(self):
        if self.kind == "iri":
            if not self.value or not _SCHEME_RE.match(self.value):
                raise TermError(f"not an absolute IRI: {self.value!r}", "value")
            if self.datatype is not None:
                raise TermError("IRI terms carry no datatype", "datatype")
        elif self.kind == "blank":
            if not _BLANK_RE.match(self.value):
                raise TermError(f"malformed blank node label: {self.value!r}", "value")
            if self.datatype is not None:
                raise TermError("blank nodes carry no datatype", "datatype")
        elif self.kind == "literal":
            if self.datatype is None:
                object.__setattr__(self, "datatype", XSD_STRING)
            elif not _SCHEME_RE.match(self.datatype):
                raise TermError(f"datatype is not an absolute IRI: {self.datatype!r}", "datatype")
        else:
            raise TermError(f"unknown term kind: {self.kind!r}", "kind")

    @property
    def is_numeric(self) -> bool:
        return self.kind == "literal" and self.datatype in NUMERIC_DATATYPES

    def numeric_value(self) -> float:
        """Parse the lexical form of a numeric literal (raises ValueError otherwise)."""
        if not self.is_numeric:
            raise ValueError(f"not a numeric literal: {self}")
        return float(self.value)

    def __repr__(self):
        if self.kind == "iri":
            return f"<{self.value}>"
        if self.kind == "blank":
            return self.value
        if self.datatype == XSD_STRING:
            return f'"{self.value}"'
        return f'"{self.value}"^^<{self.datatype}>'


def iri(value: str) -> Term:
    return Term("iri", value)


def literal(value: str, datatype: str = XSD_STRING) -> Term:
    return Term("literal", value, datatype)


def blank(label: str) -> Term:
    label = label if label.startswith("_:") else f"_:{label}"
    return Term("blank", label)


def integer_literal(value: int) -> Term:
    return Term("literal", str(int(value)), XSD_INTEGER)


def decimal_literal(value: float) -> Term:
    """Decimal literal with a stable shortest lexical form ("10.0", "712.4")."""
    f = float(value)
    if f == int(f):
        return Term("literal", f"{int(f)}.0", XSD_DECIMAL)
    return Term("literal", repr(f), XSD_DECIMAL)


@dataclass(frozen=True, slots=True, eq=False)
class Triple:
    """One statement. Equality and hashing ignore the `inferred` flag."""

    subject: Term
    predicate: Term
    object: Term
    inferred: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.subject.kind == "literal":
            raise TermError("triple subject must be an IRI or blank node", "subject")
        if self.predicate.kind != "iri":
            raise TermError("triple predicate must be an IRI", "predicate")

    def __eq__(self, other):
        if not isinstance(other, Triple):
            return NotImplemented
        return (
            self.subject == other.subject
            and self.predicate == other.predicate
            and self.object == other.object
        )

    def __hash__(self):
        return hash((self.subject, self.predicate, self.object))

    def __repr__(self):
        flag = " [inferred]" if self.inferred else ""
        return f"{self.subject!r} {self.predicate!r} {self.object!r} .{flag}"
