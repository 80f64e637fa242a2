"""
Interpret Lagrangian expression trees over Dual2 numbers.
"""

from typing import Optional

import numpy as np

from src.app.calculus.dual import Dual2
from src.app.calculus.fields import ScalarField
from src.app.dsl.nodes import Call, Constant, Expr, Neg, Var, max_var_index, static_value
from src.app.dsl.parser import format_expr
from src.app.geometry.structure import ChartDim
from src.core.errors import DimensionError, DomainError


class ExprField(ScalarField):
    """A ScalarField defined by a parsed expression."""

    def __init__(self, expr: Expr, dim: ChartDim, source: Optional[str] = None):
        if max_var_index(expr) >= dim.total:
            raise DimensionError(
                f"expression uses x{max_var_index(expr)} but the chart has 4n={dim.total} coordinates"
            )
        super().__init__(dim)
        self.expr = expr
        self.source = source if source is not None else format_expr(expr)
        self.name = f"expr[{self.source}]"

    def expression(self, x: Dual2) -> Dual2:
        return _eval(self.expr, x)


def eval_as_field(e: Expr, dim: ChartDim, source: Optional[str] = None) -> ScalarField:
    """
    Wrap an expression tree as a ScalarField.

    Domain errors raised during evaluation carry the span of the node that
    failed.

    Raises:
        DimensionError: If the tree uses a variable outside the chart.
    """
    return ExprField(e, dim, source)


def _eval(node: Expr, x: Dual2) -> Dual2:
    try:
        if isinstance(node, Constant):
            return Dual2(node.value)
        if isinstance(node, Var):
            return x[node.index]
        if isinstance(node, Neg):
            return -_eval(node.operand, x)
        if isinstance(node, Call):
            return getattr(_eval(node.arg, x), node.name)()

        lhs = _eval(node.lhs, x)
        if node.op == "^":
            exponent = static_value(node.rhs)
            if exponent is None:
                return lhs.power(_eval(node.rhs, x))
            if float(exponent).is_integer():
                return lhs.powi(int(exponent))
            return lhs.powr(float(exponent))

        rhs = _eval(node.rhs, x)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if np.any(rhs.val == 0.0):
            raise DomainError("division by zero", node.span)
        return lhs / rhs
    except DomainError as exc:
        if exc.span is None:
            raise DomainError(exc.message, node.span) from None
        raise
