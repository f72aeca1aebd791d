"""Recursive-descent parser for the SPARQL subset.

Grammar (authoritative):
    Query    := Prefix* Select
    Prefix   := 'PREFIX' PNAME ':' IRIREF
    Select   := 'SELECT' 'DISTINCT'? (Var+ | '*' |
                '(' 'COUNT' '(' 'DISTINCT'? (Var | '*') ')' 'AS' Var ')')
                'WHERE' Group Modifiers
    Group    := '{' (TriplePattern '.'? | 'FILTER' '(' Expr ')'
                     | Group 'UNION' Group)* '}'
    Modifiers:= ('GROUP' 'BY' Var+)? ('ORDER' 'BY' OrderItem+)?
                ('LIMIT' INT)? ('OFFSET' INT)?

`a` abbreviates rdf:type in predicate position; bare integers/decimals are
sugar for xsd:integer/xsd:decimal literals. Errors carry line, column and
expected-token hints.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import SparqlError
from ..terms import XSD_DECIMAL, XSD_INTEGER, Term, TermError
from ..vocab import RDF_TYPE
from .ast import (
    Aggregate,
    Arithmetic,
    Comparison,
    Filter,
    GroupPattern,
    Logical,
    Negate,
    Not,
    Regex,
    SelectQuery,
    TriplePattern,
    UnionPattern,
    Var,
    expr_variables,
)

_KEYWORDS = {
    "PREFIX", "SELECT", "DISTINCT", "WHERE", "FILTER", "UNION",
    "GROUP", "BY", "ORDER", "ASC", "DESC", "LIMIT", "OFFSET",
    "COUNT", "AS", "REGEX",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<WS>[ \t\r\n]+)
    | (?P<IRIREF><[^<>"{}|^`\\\x00-\x20]*>)
    | (?P<VAR>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<BLANK>_:[A-Za-z0-9]+)
    | (?P<PNAME>(?:[A-Za-z][A-Za-z0-9_-]*)?:[A-Za-z0-9_-]*)
    | (?P<STRING>"(?:\\.|[^"\\\n])*")
    | (?P<DECIMAL>[0-9]+\.[0-9]+)
    | (?P<INTEGER>[0-9]+)
    | (?P<WORD>[A-Za-z][A-Za-z0-9_]*)
    | (?P<PUNCT>\^\^|&&|\|\||!=|<=|>=|[{}().,=<>!+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    type: str  # IRIREF PNAME VAR BLANK STRING DECIMAL INTEGER KEYWORD A PUNCT EOF
    value: object
    line: int
    column: int

    def describe(self) -> str:
        if self.type == "EOF":
            return "end of query"
        if self.type == "PUNCT":
            return f"'{self.value}'"
        if self.type == "KEYWORD":
            return str(self.value)
        return f"{self.type} {self.value!r}"


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SparqlError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        raw = m.group()
        if kind != "WS":
            if kind == "WORD":
                upper = raw.upper()
                if upper in _KEYWORDS:
                    tokens.append(_Token("KEYWORD", upper, line, col))
                elif raw == "a":
                    tokens.append(_Token("A", "a", line, col))
                else:
                    raise SparqlError(f"unknown keyword {raw!r}", line, col)
            elif kind == "PNAME":
                prefix, _, local = raw.partition(":")
                tokens.append(_Token("PNAME", (prefix, local), line, col))
            else:
                tokens.append(_Token(kind, raw, line, col))
        newlines = raw.count("\n")
        if newlines:
            line += newlines
            col = len(raw) - raw.rfind("\n")
        else:
            col += len(raw)
        pos = m.end()
    tokens.append(_Token("EOF", None, line, col))
    return tokens


_STRING_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "'": "'", "\\": "\\"}


def _unquote(raw: str, tok: _Token) -> str:
    body = raw[1:-1]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            nxt = body[i + 1] if i + 1 < len(body) else ""
            if nxt not in _STRING_ESCAPES:
                raise SparqlError(f"unknown string escape \\{nxt}", tok.line, tok.column)
            out.append(_STRING_ESCAPES[nxt])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.type != "EOF":
            self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None, expected: list[str] | None = None):
        tok = tok or self.peek()
        raise SparqlError(message, tok.line, tok.column, expected)

    def accept_punct(self, value: str) -> bool:
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == value:
            self.advance()
            return True
        return False

    def expect_punct(self, value: str):
        tok = self.peek()
        if tok.type != "PUNCT" or tok.value != value:
            self.error(f"unexpected {tok.describe()}", tok, expected=[f"'{value}'"])
        self.advance()

    def accept_keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok.type == "KEYWORD" and tok.value == word:
            self.advance()
            return True
        return False

    def expect_keyword(self, word: str):
        tok = self.peek()
        if tok.type != "KEYWORD" or tok.value != word:
            self.error(f"unexpected {tok.describe()}", tok, expected=[word])
        self.advance()

    # -- term-ish tokens ----------------------------------------------------

    def _iri_term(self, tok: _Token) -> Term:
        try:
            return Term("iri", str(tok.value)[1:-1])
        except TermError as exc:
            self.error(str(exc), tok)

    def _pname_term(self, tok: _Token) -> Term:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            self.error(f"unknown prefix '{prefix}:'", tok)
        try:
            return Term("iri", self.prefixes[prefix] + local)
        except TermError as exc:
            self.error(str(exc), tok)

    def _literal_token(self, tok: _Token) -> Term:
        if tok.type == "STRING":
            value = _unquote(str(tok.value), tok)
            if self.accept_punct("^^"):
                dt_tok = self.peek()
                if dt_tok.type != "IRIREF":
                    self.error("datatype must be an IRI in angle brackets", dt_tok, ["IRIREF"])
                self.advance()
                try:
                    return Term("literal", value, str(dt_tok.value)[1:-1])
                except TermError as exc:
                    self.error(str(exc), dt_tok)
            return Term("literal", value)
        if tok.type == "INTEGER":
            return Term("literal", str(tok.value), XSD_INTEGER)
        if tok.type == "DECIMAL":
            return Term("literal", str(tok.value), XSD_DECIMAL)
        raise AssertionError(tok.type)

    def parse_var(self, what: str = "variable") -> Var:
        tok = self.peek()
        if tok.type != "VAR":
            self.error(f"unexpected {tok.describe()}", tok, expected=[what])
        self.advance()
        return Var(str(tok.value)[1:])

    # -- query structure ------------------------------------------------------

    def parse_query(self) -> SelectQuery:
        while self.accept_keyword("PREFIX"):
            tok = self.peek()
            if tok.type != "PNAME" or tok.value[1] != "":
                self.error("expected a prefix name like cv: after PREFIX", tok, ["PNAME ':'"])
            self.advance()
            iri_tok = self.peek()
            if iri_tok.type != "IRIREF":
                self.error("expected an IRI after the prefix name", iri_tok, ["IRIREF"])
            self.advance()
            self.prefixes[tok.value[0]] = str(iri_tok.value)[1:-1]

        self.expect_keyword("SELECT")
        distinct = self.accept_keyword("DISTINCT")
        projection = self._parse_projection()
        self.expect_keyword("WHERE")
        pattern = self.parse_group()
        group_by, order_by, limit, offset = self._parse_modifiers()
        tok = self.peek()
        if tok.type != "EOF":
            self.error(f"unexpected {tok.describe()} after query", tok, ["end of query"])

        query = SelectQuery(
            prefixes=dict(self.prefixes),
            projection=projection,
            distinct=distinct,
            pattern=pattern,
            group_by=[v for v, _ in group_by],
            order_by=order_by,
            limit=limit,
            offset=offset,
        )
        self._validate(query, group_by)
        return query

    def _parse_projection(self):
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == "*":
            self.advance()
            return "star"
        if tok.type == "PUNCT" and tok.value == "(":
            self.advance()
            self.expect_keyword("COUNT")
            self.expect_punct("(")
            distinct = self.accept_keyword("DISTINCT")
            inner = self.peek()
            if inner.type == "PUNCT" and inner.value == "*":
                self.advance()
                target = None
            else:
                target = self.parse_var("variable or '*'")
            self.expect_punct(")")
            self.expect_keyword("AS")
            alias = self.parse_var("alias variable")
            self.expect_punct(")")
            return Aggregate(distinct=distinct, target=target, alias=alias)
        variables = []
        while self.peek().type == "VAR":
            variables.append(self.parse_var())
        if not variables:
            self.error(f"unexpected {tok.describe()}", tok, expected=["variable", "'*'", "'(COUNT...'"])
        return variables

    def parse_group(self) -> GroupPattern:
        self.expect_punct("{")
        group = GroupPattern()
        while True:
            tok = self.peek()
            if tok.type == "PUNCT" and tok.value == "}":
                self.advance()
                return group
            if tok.type == "EOF":
                self.error("unterminated group", tok, ["'}'"])
            if tok.type == "PUNCT" and tok.value == "{":
                left = self.parse_group()
                if not (self.peek().type == "KEYWORD" and self.peek().value == "UNION"):
                    self.error("a nested group must be a UNION branch", self.peek(), ["UNION"])
                self.advance()
                node = UnionPattern(left, self.parse_group())
                while self.accept_keyword("UNION"):
                    # chained unions left-associate; wrap so branches stay groups
                    node = UnionPattern(GroupPattern([node]), self.parse_group())
                group.elements.append(node)
            elif tok.type == "KEYWORD" and tok.value == "FILTER":
                self.advance()
                self.expect_punct("(")
                expr = self.parse_expr()
                self.expect_punct(")")
                group.elements.append(Filter(expr, tok.line, tok.column))
            else:
                s = self.parse_slot("subject", allow_a=False)
                p = self.parse_slot("predicate", allow_a=True)
                o = self.parse_slot("object", allow_a=False)
                self.accept_punct(".")
                group.elements.append(TriplePattern(s, p, o))

    def parse_slot(self, position: str, allow_a: bool):
        tok = self.peek()
        if tok.type == "VAR":
            return self.parse_var()
        if tok.type == "A":
            if not allow_a:
                self.error("'a' is only valid in predicate position", tok)
            self.advance()
            return RDF_TYPE
        if tok.type == "IRIREF":
            self.advance()
            return self._iri_term(tok)
        if tok.type == "PNAME":
            self.advance()
            return self._pname_term(tok)
        if tok.type == "BLANK":
            self.advance()
            return Term("blank", str(tok.value))
        if tok.type in ("STRING", "INTEGER", "DECIMAL"):
            if position == "predicate":
                self.error("a literal cannot be a predicate", tok)
            self.advance()
            return self._literal_token(tok)
        self.error(
            f"unexpected {tok.describe()} in {position}",
            tok,
            expected=["variable", "IRI", "prefixed name"] + (["literal"] if position != "predicate" else []),
        )

    def _parse_modifiers(self):
        group_by: list[tuple[Var, _Token]] = []
        order_by: list[tuple[Var, bool]] = []
        limit = offset = None
        if self.accept_keyword("GROUP"):
            self.expect_keyword("BY")
            tok = self.peek()
            while self.peek().type == "VAR":
                t = self.peek()
                group_by.append((self.parse_var(), t))
            if not group_by:
                self.error("GROUP BY needs at least one variable", tok, ["variable"])
        if self.accept_keyword("ORDER"):
            self.expect_keyword("BY")
            saw = False
            while True:
                tok = self.peek()
                if tok.type == "KEYWORD" and tok.value in ("ASC", "DESC"):
                    self.advance()
                    self.expect_punct("(")
                    var = self.parse_var()
                    self.expect_punct(")")
                    order_by.append((var, tok.value == "ASC"))
                    saw = True
                elif tok.type == "VAR":
                    order_by.append((self.parse_var(), True))
                    saw = True
                else:
                    break
            if not saw:
                self.error("ORDER BY needs at least one sort key", self.peek(), ["variable", "ASC", "DESC"])
        if self.accept_keyword("LIMIT"):
            limit = self._parse_int("LIMIT")
        if self.accept_keyword("OFFSET"):
            offset = self._parse_int("OFFSET")
        return group_by, order_by, limit, offset

    def _parse_int(self, what: str) -> int:
        tok = self.peek()
        if tok.type != "INTEGER":
            self.error(f"{what} needs a non-negative integer", tok, ["INTEGER"])
        self.advance()
        return int(str(tok.value))

    # -- expressions ----------------------------------------------------------

    def parse_expr(self):
        return self._parse_or()

    def _parse_or(self):
        left = self._parse_and()
        while self.peek().type == "PUNCT" and self.peek().value == "||":
            self.advance()
            left = Logical("||", left, self._parse_and())
        return left

    def _parse_and(self):
        left = self._parse_comparison()
        while self.peek().type == "PUNCT" and self.peek().value == "&&":
            self.advance()
            left = Logical("&&", left, self._parse_comparison())
        return left

    def _parse_comparison(self):
        left = self._parse_additive()
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value in ("=", "!=", "<", "<=", ">", ">="):
            self.advance()
            return Comparison(str(tok.value), left, self._parse_additive())
        return left

    def _parse_additive(self):
        left = self._parse_multiplicative()
        while self.peek().type == "PUNCT" and self.peek().value in ("+", "-"):
            op = str(self.advance().value)
            left = Arithmetic(op, left, self._parse_multiplicative())
        return left

    def _parse_multiplicative(self):
        left = self._parse_unary()
        while self.peek().type == "PUNCT" and self.peek().value in ("*", "/"):
            op = str(self.advance().value)
            left = Arithmetic(op, left, self._parse_unary())
        return left

    def _parse_unary(self):
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == "!":
            self.advance()
            return Not(self._parse_unary())
        if tok.type == "PUNCT" and tok.value == "-":
            self.advance()
            return Negate(self._parse_unary())
        return self._parse_primary()

    def _parse_primary(self):
        tok = self.peek()
        if tok.type == "PUNCT" and tok.value == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect_punct(")")
            return expr
        if tok.type == "KEYWORD" and tok.value == "REGEX":
            self.advance()
            self.expect_punct("(")
            var = self.parse_var()
            self.expect_punct(",")
            s_tok = self.peek()
            if s_tok.type != "STRING":
                self.error("REGEX needs a string pattern", s_tok, ["STRING"])
            self.advance()
            self.expect_punct(")")
            return Regex(var, _unquote(str(s_tok.value), s_tok))
        if tok.type == "VAR":
            return self.parse_var()
        if tok.type in ("STRING", "INTEGER", "DECIMAL"):
            self.advance()
            return self._literal_token(tok)
        if tok.type == "IRIREF":
            self.advance()
            return self._iri_term(tok)
        if tok.type == "PNAME":
            self.advance()
            return self._pname_term(tok)
        self.error(
            f"unexpected {tok.describe()} in expression",
            tok,
            expected=["variable", "literal", "IRI", "'('", "REGEX"],
        )

    # -- post-parse validation -------------------------------------------------

    def _validate(self, query: SelectQuery, group_by_tokens):
        pattern_vars = query.pattern.variables()
        self._check_filters(query.pattern)

        if isinstance(query.projection, list):
            for var in query.projection:
                if var.name not in pattern_vars:
                    self.error(f"projected variable ?{var.name} does not appear in the pattern",
                               self.tokens[0])
        elif isinstance(query.projection, Aggregate):
            agg = query.projection
            if agg.target is not None and agg.target.name not in pattern_vars:
                self.error(f"COUNT target ?{agg.target.name} does not appear in the pattern",
                           self.tokens[0])
            if agg.alias.name in pattern_vars:
                self.error(f"COUNT alias ?{agg.alias.name} shadows a pattern variable", self.tokens[0])

        for var, tok in group_by_tokens:
            if var.name not in pattern_vars:
                self.error(f"GROUP BY variable ?{var.name} does not appear in the pattern", tok)
        if query.group_by and not query.is_aggregate:
            self.error("GROUP BY requires a COUNT projection", self.tokens[0])

        if query.is_aggregate:
            allowed = {v.name for v in query.group_by} | {query.projection.alias.name}
        else:
            allowed = pattern_vars
        for var, _asc in query.order_by:
            if var.name not in allowed:
                self.error(f"ORDER BY variable ?{var.name} is not available", self.tokens[0])

    def _check_filters(self, group: GroupPattern):
        gvars = group.variables()
        for element in group.elements:
            if isinstance(element, Filter):
                unbound = sorted(element.variables() - gvars)
                if unbound:
                    raise SparqlError(
                        f"filter references unbound variable ?{unbound[0]}",
                        element.line,
                        element.column,
                    )
            elif isinstance(element, UnionPattern):
                self._check_union(element)

    def _check_union(self, union: UnionPattern):
        for branch in (union.left, union.right):
            self._check_filters(branch)


def parse_query(text: str) -> SelectQuery:
    """Parse a query string into a validated SelectQuery AST."""
    return _Parser(text).parse_query()
