"""
Static checks run on every parsed model.
"""

from typing import Dict, Mapping, Set, Tuple

from errors import DomainViolation, DuplicateAssignment, DuplicateName, ModelSyntaxError, UnboundIdentifier
from modellang.ast import Expr, LabelRef, Model, Value, identifiers, is_temporal, walk
from modellang.expressions import evaluate


def _check_state_expr(expr: Expr, scope: Set[str], where: str) -> None:
    if is_temporal(expr):
        raise ModelSyntaxError(f"temporal operator in {where}", -1, -1)
    for node in walk(expr):
        if isinstance(node, LabelRef):
            raise ModelSyntaxError(f'label reference "{node.name}" in {where}', -1, -1)
    for name in identifiers(expr):
        if name not in scope:
            raise UnboundIdentifier(f"'{name}' in {where} is not a constant or variable")


def validate_model(model: Model) -> None:
    """
    Raise if *model* breaks a structural invariant:
      - names of constants, modules and variables are globally unique
      - every identifier resolves to a constant or variable
      - branch probabilities and constants reference constants only
      - no branch assigns the same variable twice
    """
    seen: Dict[str, str] = {}

    def claim(name: str, what: str) -> None:
        if name in seen:
            raise DuplicateName(f"{what} '{name}' clashes with {seen[name]} '{name}'")
        seen[name] = what

    for const in model.constants:
        claim(const.name, "constant")
    for module in model.modules:
        claim(module.name, "module")
        for var in module.variables:
            claim(var.name, "variable")

    constants = {const.name for const in model.constants}
    variables = {var.name for var in model.variables}
    everything = constants | variables

    for const in model.constants:
        _check_state_expr(const.expr, constants, f"constant '{const.name}'")

    for module in model.modules:
        for var in module.variables:
            where = f"declaration of '{var.name}'"
            for expr in (var.lo, var.hi, var.init):
                if expr is not None:
                    _check_state_expr(expr, constants, where)

        for index, command in enumerate(module.commands, start=1):
            where = f"module '{module.name}' command {index}"
            _check_state_expr(command.guard, everything, f"guard of {where}")
            for branch in command.branches:
                if branch.prob is not None:
                    _check_state_expr(branch.prob, constants, f"probability of {where}")
                written: Set[str] = set()
                for assignment in branch.assignments:
                    if assignment.var not in variables:
                        raise UnboundIdentifier(f"{where} assigns undeclared variable '{assignment.var}'")
                    if assignment.var in written:
                        raise DuplicateAssignment(f"{where} assigns '{assignment.var}' twice in one branch")
                    written.add(assignment.var)
                    _check_state_expr(assignment.expr, everything, f"update of {where}")


def variable_domains(model: Model, consts: Mapping[str, Value]) -> Dict[str, Tuple[Value, Value, Value]]:
    """
    Resolve each variable's (lo, hi, init) under a constant binding.

    Bool variables get (False, True, init); a missing init defaults to the
    lower bound. Raises DomainViolation for empty ranges or out-of-range inits.
    """
    domains: Dict[str, Tuple[Value, Value, Value]] = {}
    for var in model.variables:
        if var.kind == "bool":
            init = bool(evaluate(var.init, consts)) if var.init is not None else False
            domains[var.name] = (False, True, init)
            continue
        lo = evaluate(var.lo, consts)
        hi = evaluate(var.hi, consts)
        if isinstance(lo, float) or isinstance(hi, float) or isinstance(lo, bool) or isinstance(hi, bool):
            raise DomainViolation(f"bounds of '{var.name}' must be integers, got [{lo}..{hi}]")
        if lo > hi:
            raise DomainViolation(f"empty domain [{lo}..{hi}] for '{var.name}'")
        init = evaluate(var.init, consts) if var.init is not None else lo
        if isinstance(init, bool) or not float(init).is_integer() or not lo <= init <= hi:
            raise DomainViolation(f"init {init!r} of '{var.name}' lies outside [{lo}..{hi}]")
        domains[var.name] = (lo, hi, int(init))
    return domains
