"""Canonical N-Triples serialization and a line-oriented parser.

Dumps are deterministic: one triple per line, lines sorted by the serialized
(subject, predicate, object) text, trailing newline, UTF-8. Literals with
datatype xsd:string are written in the short form, so dump(load(dump(s)))
is byte-identical to dump(s).
"""

from __future__ import annotations

from typing import Iterator

from .errors import NTriplesError
from .store import TripleStore
from .terms import XSD_STRING, Term, TermError, Triple

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(value: str) -> str:
    out = []
    for ch in value:
        esc = _ESCAPES.get(ch)
        if esc is not None:
            out.append(esc)
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def term_text(term: Term) -> str:
    if term.kind == "iri":
        return f"<{term.value}>"
    if term.kind == "blank":
        return term.value
    lex = f'"{_escape_literal(term.value)}"'
    if term.datatype == XSD_STRING:
        return lex
    return f"{lex}^^<{term.datatype}>"


def dump(store, include_inferred: bool = True) -> str:
    """Serialize a store (or snapshot) to canonical N-Triples text."""
    lines = []
    for t in store.iter_all():
        if t.inferred and not include_inferred:
            continue
        lines.append((term_text(t.subject), term_text(t.predicate), term_text(t.object)))
    lines.sort()
    return "".join(f"{s} {p} {o} .\n" for s, p, o in lines)


class _LineScanner:
    def __init__(self, line: str, lineno: int):
        self.line = line
        self.lineno = lineno
        self.pos = 0

    def error(self, message: str):
        raise NTriplesError(message, self.lineno, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.line) and self.line[self.pos] in " \t":
            self.pos += 1

    def _unescape(self, raw: str, start_col: int) -> str:
        out = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch != "\\":
                out.append(ch)
                i += 1
                continue
            if i + 1 >= len(raw):
                raise NTriplesError("dangling escape", self.lineno, start_col + i)
            nxt = raw[i + 1]
            simple = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'"}
            if nxt in simple:
                out.append(simple[nxt])
                i += 2
            elif nxt in ("u", "U"):
                width = 4 if nxt == "u" else 8
                hexpart = raw[i + 2 : i + 2 + width]
                if len(hexpart) != width:
                    raise NTriplesError("truncated \\u escape", self.lineno, start_col + i)
                try:
                    out.append(chr(int(hexpart, 16)))
                except ValueError:
                    raise NTriplesError("bad \\u escape", self.lineno, start_col + i) from None
                i += 2 + width
            else:
                raise NTriplesError(f"unknown escape \\{nxt}", self.lineno, start_col + i)
        return "".join(out)

    def read_iri(self) -> str:
        start = self.pos
        end = self.line.find(">", self.pos + 1)
        if end < 0:
            self.error("unterminated IRI")
        raw = self.line[self.pos + 1 : end]
        self.pos = end + 1
        return self._unescape(raw, start + 2)

    def read_quoted(self) -> str:
        start = self.pos
        i = self.pos + 1
        while i < len(self.line):
            if self.line[i] == "\\":
                i += 2
                continue
            if self.line[i] == '"':
                raw = self.line[self.pos + 1 : i]
                self.pos = i + 1
                return self._unescape(raw, start + 2)
            i += 1
        self.error("unterminated string literal")

    def read_blank(self) -> str:
        i = self.pos + 2
        while i < len(self.line) and self.line[i].isalnum():
            i += 1
        label = self.line[self.pos : i]
        if len(label) <= 2:
            self.error("empty blank node label")
        self.pos = i
        return label

    def read_term(self, position: str) -> Term:
        self.skip_ws()
        if self.pos >= len(self.line):
            self.error(f"missing {position}")
        ch = self.line[self.pos]
        col = self.pos + 1
        try:
            if ch == "<":
                return Term("iri", self.read_iri())
            if ch == "_":
                if not self.line.startswith("_:", self.pos):
                    self.error("malformed blank node")
                return Term("blank", self.read_blank())
            if ch == '"':
                value = self.read_quoted()
                if self.line.startswith("^^<", self.pos):
                    self.pos += 2
                    return Term("literal", value, self.read_iri())
                return Term("literal", value)
        except TermError as exc:
            raise NTriplesError(str(exc), self.lineno, col) from None
        self.error(f"unexpected character {ch!r} in {position}")

    def expect_dot(self):
        self.skip_ws()
        if self.pos >= len(self.line) or self.line[self.pos] != ".":
            self.error("expected '.'")
        self.pos += 1
        self.skip_ws()
        if self.pos < len(self.line) and not self.line[self.pos :].startswith("#"):
            self.error("trailing content after '.'")


def parse(text: str, mark_inferred: bool = False) -> Iterator[Triple]:
    """Yield triples from N-Triples text; errors carry line and column."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        sc = _LineScanner(line, lineno)
        subject = sc.read_term("subject")
        if subject.kind == "literal":
            raise NTriplesError("literal subject not allowed", lineno, 1)
        predicate = sc.read_term("predicate")
        if predicate.kind != "iri":
            raise NTriplesError("predicate must be an IRI", lineno, 1)
        obj = sc.read_term("object")
        sc.expect_dot()
        yield Triple(subject, predicate, obj, inferred=mark_inferred)


def load(text: str, mark_inferred: bool = False, store: TripleStore | None = None) -> TripleStore:
    """Parse N-Triples text into a store (new unless one is passed in)."""
    store = store if store is not None else TripleStore()
    store.insert_many(parse(text, mark_inferred=mark_inferred))
    return store
