"""
Lagrangian expression language.

Typical use:

    expr = parse("0.5*(x0^2+x1^2+x2^2+x3^2)", ChartDim(1))
    field = eval_as_field(expr, ChartDim(1))
"""

from src.app.dsl.evaluator import ExprField, eval_as_field
from src.app.dsl.nodes import structurally_equal
from src.app.dsl.parser import format_expr, parse

__all__ = ["ExprField", "eval_as_field", "format_expr", "parse", "structurally_equal"]
