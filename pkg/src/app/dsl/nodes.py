"""Expression tree for Lagrangians. Spans and depths do not take part in equality."""

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


Span = Tuple[int, int]


@dataclass(frozen=True)
class Constant:
    value: float
    span: Span = field(default=(0, 0), compare=False, repr=False)
    depth: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    index: int
    span: Span = field(default=(0, 0), compare=False, repr=False)
    depth: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)
    depth: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    lhs: "Expr"
    rhs: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)
    depth: int = field(default=1, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"
    span: Span = field(default=(0, 0), compare=False, repr=False)
    depth: int = field(default=1, compare=False, repr=False)


Expr = Union[Constant, Var, Neg, Binary, Call]


def structurally_equal(a: Expr, b: Expr) -> bool:
    """Same node kinds, operators, constants and indices; spans ignored."""
    return a == b


def max_var_index(e: Expr) -> int:
    """Largest variable index in the tree, -1 if there is none."""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Constant):
        return -1
    if isinstance(e, Neg):
        return max_var_index(e.operand)
    if isinstance(e, Call):
        return max_var_index(e.arg)
    return max(max_var_index(e.lhs), max_var_index(e.rhs))


_STATIC_CALLS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}


def static_value(e: Expr) -> Optional[float]:
    """
    Value of a subtree without variables, else None.

    Subtrees that are undefined on the reals (sqrt(-1), 1/0, (-8)^(1/3))
    or overflow also give None, so evaluation reports them at their node.
    """
    if isinstance(e, Constant):
        return e.value
    if isinstance(e, Var):
        return None
    if isinstance(e, Neg):
        inner = static_value(e.operand)
        return None if inner is None else -inner

    try:
        if isinstance(e, Call):
            arg = static_value(e.arg)
            value = None if arg is None else _STATIC_CALLS[e.name](arg)
        else:
            lhs, rhs = static_value(e.lhs), static_value(e.rhs)
            if lhs is None or rhs is None:
                return None
            if e.op == "+":
                value = lhs + rhs
            elif e.op == "-":
                value = lhs - rhs
            elif e.op == "*":
                value = lhs * rhs
            elif e.op == "/":
                value = lhs / rhs
            else:
                value = lhs ** rhs
    except (ArithmeticError, ValueError):
        return None
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        return None
    return float(value)
