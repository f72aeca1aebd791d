"""AST for the supported SPARQL subset (SELECT over BGP + FILTER + UNION,
COUNT aggregation, solution modifiers)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union as TUnion

from ..terms import Term


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self):
        return f"?{self.name}"


Slot = TUnion[Var, Term]


@dataclass(frozen=True)
class TriplePattern:
    s: Slot
    p: Slot
    o: Slot

    def variables(self) -> set[str]:
        return {slot.name for slot in (self.s, self.p, self.o) if isinstance(slot, Var)}

    def __repr__(self):
        return f"{self.s!r} {self.p!r} {self.o!r}"


# -- filter expressions ------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    op: str  # = != < <= > >=
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Logical:
    op: str  # && ||
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


@dataclass(frozen=True)
class Arithmetic:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Negate:
    operand: "Expr"


@dataclass(frozen=True)
class Regex:
    var: Var
    pattern: str


Expr = TUnion[Comparison, Logical, Not, Arithmetic, Negate, Regex, Var, Term]


def expr_variables(expr: Expr) -> set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, (Comparison, Logical, Arithmetic)):
        return expr_variables(expr.left) | expr_variables(expr.right)
    if isinstance(expr, (Not, Negate)):
        return expr_variables(expr.operand)
    if isinstance(expr, Regex):
        return {expr.var.name}
    return set()


@dataclass(frozen=True)
class Filter:
    expr: Expr
    line: int = 0
    column: int = 0

    def variables(self) -> set[str]:
        return expr_variables(self.expr)


@dataclass(frozen=True)
class UnionPattern:
    left: "GroupPattern"
    right: "GroupPattern"

    def variables(self) -> set[str]:
        return self.left.variables() | self.right.variables()


@dataclass
class GroupPattern:
    elements: list = field(default_factory=list)  # TriplePattern | Filter | UnionPattern

    @property
    def patterns(self) -> list[TriplePattern]:
        return [e for e in self.elements if isinstance(e, TriplePattern)]

    @property
    def filters(self) -> list[Filter]:
        return [e for e in self.elements if isinstance(e, Filter)]

    @property
    def unions(self) -> list[UnionPattern]:
        return [e for e in self.elements if isinstance(e, UnionPattern)]

    def variables(self) -> set[str]:
        out: set[str] = set()
        for e in self.elements:
            if isinstance(e, (TriplePattern, UnionPattern)):
                out |= e.variables()
        return out

    def variables_in_order(self) -> list[str]:
        """Pattern variables in first-appearance order (the SELECT * order)."""
        seen: list[str] = []

        def walk(group: "GroupPattern"):
            for e in group.elements:
                if isinstance(e, TriplePattern):
                    for slot in (e.s, e.p, e.o):
                        if isinstance(slot, Var) and slot.name not in seen:
                            seen.append(slot.name)
                elif isinstance(e, UnionPattern):
                    walk(e.left)
                    walk(e.right)

        walk(self)
        return seen


@dataclass(frozen=True)
class Aggregate:
    distinct: bool
    target: Var | None  # None means '*'
    alias: Var


@dataclass
class SelectQuery:
    prefixes: dict[str, str]
    projection: list[Var] | str | Aggregate  # "star" for SELECT *
    distinct: bool
    pattern: GroupPattern
    group_by: list[Var] = field(default_factory=list)
    order_by: list[tuple[Var, bool]] = field(default_factory=list)  # (var, ascending)
    limit: int | None = None
    offset: int | None = None

    @property
    def is_aggregate(self) -> bool:
        return isinstance(self.projection, Aggregate)
