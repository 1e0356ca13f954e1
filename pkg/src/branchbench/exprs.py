"""Integer expression trees for intensional constraints.

Expressions are prefix-functional: ``ne(x,y)``, ``eq(add(x,1),y)``,
``lt(dist(a,b),3)``.  Arithmetic is 64-bit signed; any intermediate outside
that range raises :class:`EvalError` instead of wrapping.  ``div`` truncates
toward zero and ``mod`` takes the sign of the dividend (C semantics), and
both raise :class:`EvalError` on a zero divisor.  Comparisons and logical
operators return 1 or 0; ``and``/``or`` treat any non-zero operand as true.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

UNARY_OPS = ("neg", "abs")
BINARY_OPS = (
    "add", "sub", "mul", "div", "mod", "min", "max",
    "eq", "ne", "lt", "le", "gt", "ge", "and", "or", "dist",
)

OP_ARITY = {op: 1 for op in UNARY_OPS}
OP_ARITY.update({op: 2 for op in BINARY_OPS})


class EvalError(Exception):
    """Raised for division/modulo by zero, overflow, or an unbound variable."""


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class VarRef:
    name: str


@dataclass(frozen=True)
class Call:
    op: str
    args: tuple["Expr", ...]

    def __post_init__(self) -> None:
        if self.op not in OP_ARITY:
            raise ValueError(f"unknown operator {self.op!r}")
        if len(self.args) != OP_ARITY[self.op]:
            raise ValueError(
                f"operator {self.op!r} takes {OP_ARITY[self.op]} arguments, "
                f"got {len(self.args)}"
            )


Expr = Union[Const, VarRef, Call]


def _check64(x: int) -> int:
    if not INT64_MIN <= x <= INT64_MAX:
        raise EvalError(f"64-bit overflow: {x}")
    return x


def _trunc_div(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _trunc_mod(a: int, b: int) -> int:
    if b == 0:
        raise EvalError("modulo by zero")
    r = abs(a) % abs(b)
    return r if a >= 0 else -r


def eval_expr(expr: Expr, bindings: Mapping[str, int]) -> int:
    """Evaluate ``expr`` with variables bound by ``bindings``."""
    if isinstance(expr, Const):
        return _check64(expr.value)
    if isinstance(expr, VarRef):
        try:
            return _check64(bindings[expr.name])
        except KeyError:
            raise EvalError(f"unbound variable {expr.name!r}") from None
    op = expr.op
    if op == "neg":
        return _check64(-eval_expr(expr.args[0], bindings))
    if op == "abs":
        return _check64(abs(eval_expr(expr.args[0], bindings)))
    a = eval_expr(expr.args[0], bindings)
    b = eval_expr(expr.args[1], bindings)
    if op == "add":
        return _check64(a + b)
    if op == "sub":
        return _check64(a - b)
    if op == "mul":
        return _check64(a * b)
    if op == "div":
        return _check64(_trunc_div(a, b))
    if op == "mod":
        return _check64(_trunc_mod(a, b))
    if op == "min":
        return a if a <= b else b
    if op == "max":
        return a if a >= b else b
    if op == "eq":
        return int(a == b)
    if op == "ne":
        return int(a != b)
    if op == "lt":
        return int(a < b)
    if op == "le":
        return int(a <= b)
    if op == "gt":
        return int(a > b)
    if op == "ge":
        return int(a >= b)
    if op == "and":
        return int(a != 0 and b != 0)
    if op == "or":
        return int(a != 0 or b != 0)
    if op == "dist":
        return _check64(abs(a - b))
    raise EvalError(f"unknown operator {op!r}")  # pragma: no cover


def expr_vars(expr: Expr) -> set[str]:
    """Names of all variables referenced by ``expr``."""
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, VarRef):
        return {expr.name}
    out: set[str] = set()
    for a in expr.args:
        out |= expr_vars(a)
    return out


def format_expr(expr: Expr) -> str:
    """Canonical prefix text, e.g. ``eq(add(x,1),y)``."""
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, VarRef):
        return expr.name
    return f"{expr.op}({','.join(format_expr(a) for a in expr.args)})"


def rename_expr(expr: Expr, mapping: Mapping[str, str]) -> Expr:
    """Copy of ``expr`` with variable names replaced through ``mapping``."""
    if isinstance(expr, Const):
        return expr
    if isinstance(expr, VarRef):
        return VarRef(mapping.get(expr.name, expr.name))
    return Call(expr.op, tuple(rename_expr(a, mapping) for a in expr.args))
