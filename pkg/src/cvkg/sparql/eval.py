"""Query evaluation over a store snapshot.

Bag semantics. Within a group the triple patterns are joined left-deep in a
greedy order: before each step every remaining pattern is estimated by
summing index countMatch over the current solutions with bound variables
substituted, and the cheapest pattern runs next. Filters apply as soon as
their variables are bound; UNION branches are evaluated independently and
concatenated, then joined in. A type error inside a filter makes the filter
false for that row, never aborting the query.

force_scan=True answers every pattern by scanning the whole store instead of
probing the indexes — the honest baseline for the selectivity speedup check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..store import as_snapshot
from ..terms import XSD_BOOLEAN, XSD_STRING, Term, integer_literal
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
)

_ERR = object()  # filter type-error sentinel
_MISSING = object()  # constant term absent from the dictionary


@dataclass
class SolutionSequence:
    variables: list[str]
    rows: list[dict[str, Term]]

    def __len__(self):
        return len(self.rows)


@dataclass
class PlanStep:
    pattern: TriplePattern
    estimate: int


def evaluate(query: SelectQuery, store, force_scan: bool = False) -> SolutionSequence:
    return _run(query, store, force_scan)[0]


def explain_join_order(query: SelectQuery, store) -> list[PlanStep]:
    """The exact pattern order evaluate() uses, with the estimate that picked
    each pattern (computed by running the evaluation)."""
    return _run(query, store, force_scan=False)[1]


def _run(query: SelectQuery, store, force_scan: bool):
    snap = as_snapshot(store)
    plan: list[PlanStep] = []
    rows = _eval_group(query.pattern, snap, force_scan, plan)
    all_vars = query.pattern.variables_in_order()

    if isinstance(query.projection, Aggregate):
        out_vars, rows = _aggregate(query, rows, all_vars)
    elif query.projection == "star":
        out_vars = all_vars
    else:
        out_vars = [v.name for v in query.projection]

    if query.order_by:
        for var, ascending in reversed(query.order_by):
            rows.sort(key=lambda r, v=var.name: _sort_key(r.get(v), snap), reverse=not ascending)

    projected = [{v: row[v] for v in out_vars if v in row} for row in rows]

    if query.distinct:
        seen = set()
        unique = []
        for row in projected:
            key = tuple(_dedup_key(row.get(v), snap) for v in out_vars)
            if key not in seen:
                seen.add(key)
                unique.append(row)
        projected = unique

    start = query.offset or 0
    end = start + query.limit if query.limit is not None else None
    projected = projected[start:end]

    term_rows = [{v: _to_term(val, snap) for v, val in row.items()} for row in projected]
    return SolutionSequence(out_vars, term_rows), plan


def _to_term(value, snap) -> Term:
    return value if isinstance(value, Term) else snap.term(value)


def _dedup_key(value, snap):
    if value is None:
        return None
    return _to_term(value, snap)


# -- group evaluation ---------------------------------------------------------


def _compile(pattern: TriplePattern, snap):
    slots = []
    for slot in (pattern.s, pattern.p, pattern.o):
        if isinstance(slot, Var):
            slots.append(slot)
        else:
            tid = snap.term_id(slot)
            slots.append(_MISSING if tid is None else tid)
    return tuple(slots)


def _resolve(compiled, row):
    """Substitute bound variables; None marks a wildcard position."""
    out = []
    for slot in compiled:
        if slot is _MISSING:
            return None
        if isinstance(slot, Var):
            out.append(row.get(slot.name))
        else:
            out.append(slot)
    return out


def _eval_group(group: GroupPattern, snap, force_scan: bool, plan: list[PlanStep]):
    rows: list[dict[str, int]] = [{}]
    bound: set[str] = set()
    pending: list[Filter] = list(group.filters)

    def apply_ready():
        nonlocal rows, pending
        ready = [f for f in pending if f.variables() <= bound]
        if ready:
            pending = [f for f in pending if not (f.variables() <= bound)]
            for f in ready:
                rows = [r for r in rows if _ebv(_eval_expr(f.expr, r, snap)) is True]

    remaining = [(i, pat, _compile(pat, snap)) for i, pat in enumerate(group.patterns)]
    while remaining:
        if force_scan:
            pick = 0
            estimate = -1
        else:
            pick = 0
            estimate = None
            for k, (_i, _pat, comp) in enumerate(remaining):
                est = _estimate(comp, rows, snap)
                if estimate is None or est < estimate:
                    estimate = est
                    pick = k
        i, pat, comp = remaining.pop(pick)
        plan.append(PlanStep(pat, -1 if estimate is None else estimate))
        rows = _extend(rows, comp, snap, force_scan)
        bound |= pat.variables()
        apply_ready()

    for union in group.unions:
        branch_rows = _eval_union(union, snap, force_scan, plan)
        rows = _join(rows, branch_rows)
        bound |= union.variables()
        apply_ready()

    for f in pending:  # union rows may leave a referenced var unbound per-row
        rows = [r for r in rows if _ebv(_eval_expr(f.expr, r, snap)) is True]
    return rows


def _eval_union(union: UnionPattern, snap, force_scan, plan):
    return _eval_group(union.left, snap, force_scan, plan) + _eval_group(
        union.right, snap, force_scan, plan
    )


def _estimate(compiled, rows, snap) -> int:
    total = 0
    for row in rows:
        ids = _resolve(compiled, row)
        if ids is None:
            continue
        total += snap.count_ids(*ids)
    return total


def _extend(rows, compiled, snap, force_scan):
    out = []
    for row in rows:
        ids = _resolve(compiled, row)
        if ids is None:
            continue
        if force_scan:
            rs, rp, ro = _scan_full(snap, ids)
        else:
            rs, rp, ro = snap.scan_ids(*ids)
        var_slots = [
            (pos, slot.name)
            for pos, slot in enumerate(compiled)
            if isinstance(slot, Var) and slot.name not in row
        ]
        if not var_slots:
            out.extend(dict(row) for _ in range(len(rs)))
            continue
        for k in range(len(rs)):
            values = (rs[k], rp[k], ro[k])
            new = dict(row)
            ok = True
            for pos, name in var_slots:
                v = int(values[pos])
                if name in new and new[name] != v:
                    ok = False
                    break
                new[name] = v
            if ok:
                out.append(new)
    return out


def _scan_full(snap, ids):
    """Match by scanning every row (no index narrowing)."""
    rs, rp, ro = snap.scan_ids(None, None, None)
    mask = np.ones(len(rs), dtype=bool)
    for col, key in ((rs, ids[0]), (rp, ids[1]), (ro, ids[2])):
        if key is not None:
            mask &= col == key
    return rs[mask], rp[mask], ro[mask]


def _join(left_rows, right_rows):
    out = []
    for lr in left_rows:
        for rr in right_rows:
            merged = dict(lr)
            ok = True
            for k, v in rr.items():
                if k in merged and merged[k] != v:
                    ok = False
                    break
                merged[k] = v
            if ok:
                out.append(merged)
    return out


# -- aggregation ----------------------------------------------------------------


def _aggregate(query: SelectQuery, rows, all_vars):
    agg: Aggregate = query.projection
    group_names = [v.name for v in query.group_by]
    groups: dict[tuple, list] = {}
    for row in rows:
        groups.setdefault(tuple(row.get(g) for g in group_names), []).append(row)
    if not group_names and not groups:
        groups[()] = []  # COUNT over an empty solution set still yields one row

    out_vars = group_names + [agg.alias.name]
    out_rows = []
    for key, members in groups.items():
        if agg.target is None:
            if agg.distinct:
                count = len({tuple(m.get(v) for v in all_vars) for m in members})
            else:
                count = len(members)
        else:
            values = [m[agg.target.name] for m in members if agg.target.name in m]
            count = len(set(values)) if agg.distinct else len(values)
        out = {g: key[i] for i, g in enumerate(group_names) if key[i] is not None}
        out[agg.alias.name] = integer_literal(count)
        out_rows.append(out)
    return out_vars, out_rows


# -- filter expression evaluation ---------------------------------------------


def _eval_expr(expr, row, snap):
    if isinstance(expr, Var):
        tid = row.get(expr.name)
        return _ERR if tid is None else _to_term(tid, snap)
    if isinstance(expr, Term):
        return expr
    if isinstance(expr, Comparison):
        return _compare(expr.op, _eval_expr(expr.left, row, snap), _eval_expr(expr.right, row, snap))
    if isinstance(expr, Logical):
        lv = _ebv(_eval_expr(expr.left, row, snap))
        rv = _ebv(_eval_expr(expr.right, row, snap))
        if expr.op == "&&":
            if lv is False or rv is False:
                return False
            if lv is _ERR or rv is _ERR:
                return _ERR
            return True
        if lv is True or rv is True:
            return True
        if lv is _ERR or rv is _ERR:
            return _ERR
        return False
    if isinstance(expr, Not):
        v = _ebv(_eval_expr(expr.operand, row, snap))
        return _ERR if v is _ERR else not v
    if isinstance(expr, Negate):
        n = _number(_eval_expr(expr.operand, row, snap))
        return _ERR if n is None else -n
    if isinstance(expr, Arithmetic):
        ln = _number(_eval_expr(expr.left, row, snap))
        rn = _number(_eval_expr(expr.right, row, snap))
        if ln is None or rn is None:
            return _ERR
        if expr.op == "+":
            return ln + rn
        if expr.op == "-":
            return ln - rn
        if expr.op == "*":
            return ln * rn
        if rn == 0:
            return _ERR
        return ln / rn
    if isinstance(expr, Regex):
        tid = row.get(expr.var.name)
        if tid is None:
            return _ERR
        term = _to_term(tid, snap)
        if term.kind != "literal":
            return _ERR
        try:
            return re.search(expr.pattern, term.value) is not None
        except re.error:
            return _ERR
    raise TypeError(f"unknown expression node: {expr!r}")


def _number(value):
    if value is _ERR or value is None:
        return None
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, Term) and value.is_numeric:
        try:
            return float(value.value)
        except ValueError:
            return None
    return None


def _compare(op, lv, rv):
    if lv is _ERR or rv is _ERR:
        return _ERR
    ln, rn = _number(lv), _number(rv)
    if ln is not None and rn is not None:
        return _apply(op, ln, rn)
    if op in ("=", "!="):
        if isinstance(lv, Term) and isinstance(rv, Term):
            return (lv == rv) if op == "=" else (lv != rv)
        if isinstance(lv, bool) and isinstance(rv, bool):
            return (lv == rv) if op == "=" else (lv != rv)
        return _ERR
    if (
        isinstance(lv, Term)
        and isinstance(rv, Term)
        and lv.kind == "literal"
        and rv.kind == "literal"
        and lv.datatype == XSD_STRING
        and rv.datatype == XSD_STRING
    ):
        return _apply(op, lv.value, rv.value)
    return _ERR


def _apply(op, a, b):
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def _ebv(value):
    """Effective boolean value, three-valued."""
    if value is _ERR:
        return _ERR
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return value != 0
    if isinstance(value, Term) and value.kind == "literal":
        if value.datatype == XSD_BOOLEAN:
            return value.value == "true"
        if value.is_numeric:
            try:
                return float(value.value) != 0
            except ValueError:
                return _ERR
        if value.datatype == XSD_STRING:
            return len(value.value) > 0
    return _ERR


# -- term ordering --------------------------------------------------------------


def _sort_key(value, snap):
    """Total order: unbound < IRI < blank < literal; numeric literals by
    value (before other literals), others by lexical form then datatype."""
    if value is None:
        return (0,)
    term = _to_term(value, snap)
    if term.kind == "iri":
        return (1, term.value)
    if term.kind == "blank":
        return (2, term.value)
    if term.is_numeric:
        try:
            return (3, 0, float(term.value), term.value, term.datatype)
        except ValueError:
            pass
    return (3, 1, term.value, term.datatype)
