"""
Constant resolution and overriding.

Constants may be defined in terms of one another (``pGazeTP = 1-pGazeFN``).
resolve_constants evaluates the whole set in dependency order; set_constants
rebinds some of them to literals and keeps complement pairs consistent.
"""

import logging
from dataclasses import replace
from typing import Dict, Mapping, Optional, Set, Tuple, Union

from errors import (
    InconsistentOverride, KindMismatch, ProbabilityOutOfRange, UnboundIdentifier, UnknownConstant,
)
from modellang.ast import Binary, BoolLit, ConstantDef, Expr, FloatLit, Ident, IntLit, Model, Value, identifiers
from modellang.expressions import evaluate

logger = logging.getLogger(__name__)

ConstantSet = Dict[str, Union[int, float, bool]]

PAIR_TOLERANCE = 1e-9


def _coerce(const: ConstantDef, value: Value) -> Value:
    if const.kind == "bool":
        if not isinstance(value, bool):
            raise KindMismatch(f"constant '{const.name}' is bool but evaluates to {value!r}")
        return value
    if isinstance(value, bool):
        raise KindMismatch(f"constant '{const.name}' is {const.kind} but evaluates to a bool")
    if const.kind == "int":
        if isinstance(value, float):
            if not value.is_integer():
                raise KindMismatch(f"constant '{const.name}' is int but evaluates to {value!r}")
            return int(value)
        return int(value)
    return float(value)


def resolve_constants(model: Model) -> ConstantSet:
    """Evaluate every constant of *model*; returns name → value in declaration order"""
    by_name = {const.name: const for const in model.constants}
    resolved: ConstantSet = {}
    in_progress: Set[str] = set()

    def resolve(name: str) -> Value:
        if name in resolved:
            return resolved[name]
        if name in in_progress:
            raise UnboundIdentifier(f"constant '{name}' is defined in terms of itself")
        const = by_name[name]
        in_progress.add(name)
        env = {}
        for ref in identifiers(const.expr):
            if ref not in by_name:
                raise UnboundIdentifier(f"constant '{name}' refers to '{ref}', which is not a constant")
            env[ref] = resolve(ref)
        in_progress.discard(name)
        resolved[name] = _coerce(const, evaluate(const.expr, env))
        return resolved[name]

    for const in model.constants:
        resolve(const.name)
    return {const.name: resolved[const.name] for const in model.constants}


def complement_of(expr: Expr) -> Optional[str]:
    """Name X when *expr* is exactly ``1 - X``, else None"""
    if (
        isinstance(expr, Binary)
        and expr.op == "-"
        and isinstance(expr.left, (IntLit, FloatLit))
        and expr.left.value == 1
        and isinstance(expr.right, Ident)
    ):
        return expr.right.name
    return None


def probability_constants(model: Model) -> Set[str]:
    """
    Constants that must lie in [0, 1]: every constant named in a branch
    probability, plus both members of each ``1 - X`` pair.
    """
    names: Set[str] = set()
    declared = {const.name for const in model.constants}
    for module in model.modules:
        for command in module.commands:
            for branch in command.branches:
                if branch.prob is not None:
                    names.update(ref for ref in identifiers(branch.prob) if ref in declared)
    for const in model.constants:
        partner = complement_of(const.expr)
        if partner is not None and const.kind == "double":
            names.add(const.name)
            names.add(partner)
    return names


def _literal(const: ConstantDef, value: Value) -> Expr:
    if const.kind == "bool":
        if not isinstance(value, bool):
            raise KindMismatch(f"constant '{const.name}' is bool, got {value!r}")
        return BoolLit(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise KindMismatch(f"constant '{const.name}' is {const.kind}, got {value!r}")
    if const.kind == "int":
        if isinstance(value, float):
            raise KindMismatch(f"constant '{const.name}' is int, got {value!r}")
        return IntLit(int(value))
    return FloatLit(float(value))


def set_constants(model: Model, overrides: Optional[Mapping[str, Value]] = None) -> Model:
    """
    Rebind constants of *model* to literal values.

    Derived constants re-evaluate automatically. Overriding the derived member
    of a ``B = 1 - A`` pair flips the pair: B becomes the literal and A is
    redefined as ``1 - B``. When both members are overridden they must agree
    to within 1e-9 and the declared direction is kept.

    Raises:
        UnknownConstant, KindMismatch, ProbabilityOutOfRange, InconsistentOverride
    """
    overrides = dict(overrides or {})
    if not overrides:
        return model

    by_name = {const.name: const for const in model.constants}
    for name in overrides:
        if name not in by_name:
            raise UnknownConstant(f"model '{model.name}' declares no constant '{name}'")

    new_exprs: Dict[str, Expr] = {const.name: const.expr for const in model.constants}
    skip: Set[str] = set()

    for name, value in overrides.items():
        const = by_name[name]
        partner = complement_of(const.expr)
        if partner is not None and partner in overrides:
            # Both members given: keep declared direction, check consistency
            if abs(float(value) + float(overrides[partner]) - 1.0) > PAIR_TOLERANCE:
                raise InconsistentOverride(
                    f"'{name}'={value} and '{partner}'={overrides[partner]} do not sum to 1"
                )
            skip.add(name)

    for name, value in overrides.items():
        if name in skip:
            continue
        const = by_name[name]
        new_exprs[name] = _literal(const, value)
        partner = complement_of(const.expr)
        if partner is not None and partner not in overrides:
            new_exprs[partner] = Binary("-", IntLit(1), Ident(name))
            logger.debug(f"[Constants] Flipped pair: {partner} := 1-{name}")

    rebound = replace(
        model,
        constants=tuple(replace(const, expr=new_exprs[const.name]) for const in model.constants),
    )
    values = resolve_constants(rebound)
    for name in sorted(probability_constants(rebound)):
        value = values[name]
        if not 0.0 <= float(value) <= 1.0:
            raise ProbabilityOutOfRange(f"constant '{name}' = {value} lies outside [0, 1]")
    logger.info(f"[Constants] ✅ Applied {len(overrides)} override(s) to '{model.name}'")
    return rebound


def constant_pairs(model: Model) -> Tuple[Tuple[str, str], ...]:
    """(X, complement) pairs declared as ``complement = 1 - X``"""
    return tuple(
        (partner, const.name)
        for const in model.constants
        if (partner := complement_of(const.expr)) is not None
    )
