from .ast import GroupPattern, SelectQuery, TriplePattern, Var
from .eval import PlanStep, SolutionSequence, evaluate, explain_join_order
from .parser import parse_query
from .results import solutions_to_json

__all__ = [
    "GroupPattern",
    "PlanStep",
    "SelectQuery",
    "SolutionSequence",
    "TriplePattern",
    "Var",
    "evaluate",
    "explain_join_order",
    "parse_query",
    "solutions_to_json",
]
