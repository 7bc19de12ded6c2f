"""
Canonical printing. parse_model(print_model(m), m.name) == m for every model.
"""

from typing import List

from modellang.ast import Binary, BoolLit, Branch, Command, Expr, FloatLit, Ident, IntLit, LabelRef, Model, Unary


def print_expr(expr: Expr) -> str:
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, FloatLit):
        return repr(expr.value)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, LabelRef):
        return f'"{expr.name}"'
    if isinstance(expr, Unary):
        operand = print_expr(expr.operand)
        if isinstance(expr.operand, (Binary, Unary)):
            operand = f"({operand})"
        separator = " " if expr.op in ("F", "G", "X") else ""
        return f"{expr.op}{separator}{operand}"
    if isinstance(expr, Binary):
        left = print_expr(expr.left)
        right = print_expr(expr.right)
        # Parenthesise every compound operand; parentheses leave no trace in the tree
        if isinstance(expr.left, (Binary, Unary)):
            left = f"({left})"
        if isinstance(expr.right, (Binary, Unary)):
            right = f"({right})"
        return f"{left} {expr.op} {right}"
    raise TypeError(f"not an expression: {expr!r}")


def _print_branch(branch: Branch) -> str:
    updates = " & ".join(f"({a.var}'={print_expr(a.expr)})" for a in branch.assignments)
    if branch.prob is None:
        return updates
    return f"{print_expr(branch.prob)}:{updates}"


def print_command(command: Command) -> str:
    label = command.label or ""
    if len(command.branches) == 1 and command.branches[0].prob is None and not command.branches[0].assignments:
        body = "true"
    else:
        body = " + ".join(_print_branch(branch) for branch in command.branches)
    return f"[{label}] {print_expr(command.guard)} -> {body};"


def print_model(model: Model) -> str:
    lines: List[str] = ["dtmc", ""]
    for const in model.constants:
        lines.append(f"const {const.kind} {const.name} = {print_expr(const.expr)};")
    for module in model.modules:
        lines.append("")
        lines.append(f"module {module.name}")
        for var in module.variables:
            init = f" init {print_expr(var.init)}" if var.init is not None else ""
            if var.kind == "bool":
                lines.append(f"  {var.name} : bool{init};")
            else:
                lines.append(f"  {var.name} : [{print_expr(var.lo)}..{print_expr(var.hi)}]{init};")
        for command in module.commands:
            lines.append(f"  {print_command(command)}")
        lines.append("endmodule")
    return "\n".join(lines) + "\n"
