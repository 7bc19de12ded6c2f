"""
Expression evaluation.

Two entry points share one operator table:
  - evaluate()      walks the tree against a name→value mapping
  - compile_expr()  folds constants and returns a closure over a state tuple,
                    used in the chain builder's inner loop
"""

import operator
from typing import Callable, Dict, Mapping, Optional, Tuple

from errors import DivisionByZero, UnboundIdentifier
from modellang.ast import Binary, BoolLit, Expr, FloatLit, Ident, IntLit, LabelRef, Unary, Value


def _divide(left: Value, right: Value) -> float:
    if right == 0:
        raise DivisionByZero(f"division by zero ({left} / {right})")
    return float(left) / float(right)


# left operand value that decides the result without looking at the right one
_LAZY: Dict[str, bool] = {"&": False, "|": True, "=>": False}


_STRICT_BINARY: Dict[str, Callable[[Value, Value], Value]] = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": _divide,
}

_UNARY: Dict[str, Callable[[Value], Value]] = {
    "!": operator.not_,
    "-": operator.neg,
}


def _unbound(name: str) -> UnboundIdentifier:
    return UnboundIdentifier(f"identifier '{name}' is not a constant or variable")


def evaluate(expr: Expr, env: Mapping[str, Value]) -> Value:
    """Evaluate *expr* with every identifier looked up in *env*"""
    if isinstance(expr, (IntLit, FloatLit, BoolLit)):
        return expr.value
    if isinstance(expr, Ident):
        if expr.name not in env:
            raise _unbound(expr.name)
        return env[expr.name]
    if isinstance(expr, Unary):
        if expr.op not in _UNARY:
            raise ValueError(f"temporal operator '{expr.op}' cannot be evaluated on a state")
        return _UNARY[expr.op](evaluate(expr.operand, env))
    if isinstance(expr, Binary):
        # & | => short-circuit
        if expr.op == "&":
            return bool(evaluate(expr.left, env)) and bool(evaluate(expr.right, env))
        if expr.op == "|":
            return bool(evaluate(expr.left, env)) or bool(evaluate(expr.right, env))
        if expr.op == "=>":
            return (not evaluate(expr.left, env)) or bool(evaluate(expr.right, env))
        if expr.op not in _STRICT_BINARY:
            raise ValueError(f"temporal operator '{expr.op}' cannot be evaluated on a state")
        return _STRICT_BINARY[expr.op](evaluate(expr.left, env), evaluate(expr.right, env))
    if isinstance(expr, LabelRef):
        raise _unbound(f'"{expr.name}"')
    raise TypeError(f"not an expression: {expr!r}")


def eval_expr(expr: Expr, state: Mapping[str, Value], consts: Mapping[str, Value]) -> Value:
    """Evaluate against a state valuation and a constant binding (state wins on clashes)"""
    env: Dict[str, Value] = dict(consts)
    env.update(state)
    return evaluate(expr, env)


StateFn = Callable[[Tuple[Value, ...]], Value]


def compile_expr(
    expr: Expr,
    var_index: Mapping[str, int],
    consts: Mapping[str, Value],
    on_unbound: Optional[Callable[[str], Exception]] = None,
) -> StateFn:
    """
    Compile *expr* into a function of a state tuple.

    Identifiers resolve to state slots first, then to constants. Subtrees
    without state references are folded to a single value up front.
    """
    make_error = on_unbound or _unbound

    def build(node: Expr) -> Tuple[bool, object]:
        # (is_constant, value-or-closure)
        if isinstance(node, (IntLit, FloatLit, BoolLit)):
            return True, node.value
        if isinstance(node, Ident):
            if node.name in var_index:
                slot = var_index[node.name]
                return False, lambda state: state[slot]
            if node.name in consts:
                return True, consts[node.name]
            raise make_error(node.name)
        if isinstance(node, LabelRef):
            raise make_error(f'"{node.name}"')
        if isinstance(node, Unary):
            if node.op not in _UNARY:
                raise ValueError(f"temporal operator '{node.op}' cannot be evaluated on a state")
            fn = _UNARY[node.op]
            const, inner = build(node.operand)
            if const:
                return True, fn(inner)
            return False, lambda state: fn(inner(state))
        if isinstance(node, Binary):
            if node.op in _LAZY:
                return lazy(node)
            if node.op not in _STRICT_BINARY:
                raise ValueError(f"temporal operator '{node.op}' cannot be evaluated on a state")
            fn = _STRICT_BINARY[node.op]
            lconst, left = build(node.left)
            rconst, right = build(node.right)
            if lconst and rconst:
                return fold(fn, left, right)
            if lconst:
                return False, lambda state: fn(left, right(state))
            if rconst:
                return False, lambda state: fn(left(state), right)
            return False, lambda state: fn(left(state), right(state))
        raise TypeError(f"not an expression: {node!r}")

    def fold(fn: Callable[[Value, Value], Value], left: Value, right: Value) -> Tuple[bool, object]:
        # a failing constant subtree (10/0) only raises if a state actually reaches it
        try:
            return True, fn(left, right)
        except DivisionByZero as exc:
            error = exc

            def fail(state):
                raise error
            return False, fail

    def lazy(node: Binary) -> Tuple[bool, object]:
        # & | => evaluate the right operand only when the left one does not decide
        lconst, left = build(node.left)
        rconst, right = build(node.right)
        decisive = _LAZY[node.op]
        if lconst:
            if bool(left) == decisive:
                return True, node.op != "&"
            if rconst:
                return True, bool(right)
            return False, lambda state: bool(right(state))
        take = (lambda state: bool(right)) if rconst else (lambda state: bool(right(state)))
        if node.op == "&":
            return False, lambda state: bool(left(state)) and take(state)
        if node.op == "|":
            return False, lambda state: bool(left(state)) or take(state)
        return False, lambda state: (not left(state)) or take(state)

    is_const, result = build(expr)
    if is_const:
        return lambda state: result
    return result
