"""
Property front end: recognises one of the six supported patterns in a parsed
query and resolves label references and atom identifiers.
"""

import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

from errors import UnboundAtomIdentifier, UnsupportedPattern
from modellang.ast import Binary, Expr, LabelRef, Model, Unary, identifiers, is_temporal
from modellang.parser import RawLabel, RawQuery, parse_raw_query, parse_raw_queryfile
from modellang.printer import print_expr

from .formulas import (
    SUPPORTED_PATTERNS, Eventuality, Eventually, Globally, GloballyAny, NextSafety,
    PathFormula, PropertyQuery, Response, Until,
)

logger = logging.getLogger(__name__)

Labels = Mapping[str, Expr]


def _inline_labels(expr: Expr, labels: Labels) -> Expr:
    if isinstance(expr, LabelRef):
        if expr.name not in labels:
            raise UnboundAtomIdentifier(f'label "{expr.name}" is not defined')
        return labels[expr.name]
    if isinstance(expr, Unary):
        return Unary(expr.op, _inline_labels(expr.operand, labels))
    if isinstance(expr, Binary):
        return Binary(expr.op, _inline_labels(expr.left, labels), _inline_labels(expr.right, labels))
    return expr


def _unsupported(expr: Expr) -> UnsupportedPattern:
    patterns = "; ".join(SUPPORTED_PATTERNS)
    return UnsupportedPattern(
        f"'{print_expr(expr)}' is not one of the supported patterns: {patterns} "
        f"(φ, ψ temporal-free state predicates)"
    )


def _state(expr: Expr) -> bool:
    return not is_temporal(expr)


def _disjuncts(expr: Expr) -> List[Expr]:
    if isinstance(expr, Binary) and expr.op == "|":
        return _disjuncts(expr.left) + _disjuncts(expr.right)
    return [expr]


def _eventuality(expr: Expr) -> Optional[Eventuality]:
    if not (isinstance(expr, Unary) and expr.op == "F"):
        return None
    body = expr.operand
    if _state(body):
        return Eventuality(body)
    if isinstance(body, Binary) and body.op == "U" and _state(body.left) and _state(body.right):
        return Eventuality(body.left, body.right)
    return None


def classify(expr: Expr) -> PathFormula:
    """Map a path expression onto one of the six patterns, or raise UnsupportedPattern"""
    if isinstance(expr, Unary) and expr.op == "F" and _state(expr.operand):
        return Eventually(expr.operand)

    if isinstance(expr, Binary) and expr.op == "U" and _state(expr.left) and _state(expr.right):
        return Until(expr.left, expr.right)

    if isinstance(expr, Unary) and expr.op == "G":
        body = expr.operand
        if _state(body):
            return Globally(body)

        if isinstance(body, Binary) and body.op == "=>" and _state(body.left):
            consequent = body.right
            # G(φ ⇒ F ψ)
            if isinstance(consequent, Unary) and consequent.op == "F" and _state(consequent.operand):
                return Response(body.left, consequent.operand)
            # G(φ ⇒ ¬X ψ), also written G(φ ⇒ X ¬ψ)
            if isinstance(consequent, Unary) and consequent.op == "!":
                inner = consequent.operand
                if isinstance(inner, Unary) and inner.op == "X" and _state(inner.operand):
                    return NextSafety(body.left, inner.operand)
            if isinstance(consequent, Unary) and consequent.op == "X":
                inner = consequent.operand
                if isinstance(inner, Unary) and inner.op == "!" and _state(inner.operand):
                    return NextSafety(body.left, inner.operand)

        eventualities = [_eventuality(part) for part in _disjuncts(body)]
        if eventualities and all(e is not None for e in eventualities):
            return GloballyAny(tuple(eventualities))

    raise _unsupported(expr)


def check_atoms(expr: Expr, model: Model) -> None:
    """Raise UnboundAtomIdentifier unless every identifier is a variable or constant of *model*"""
    known = {var.name for var in model.variables} | {const.name for const in model.constants}
    for name in identifiers(expr):
        if name not in known:
            raise UnboundAtomIdentifier(f"'{name}' is neither a variable nor a constant of '{model.name}'")


def _to_query(raw: RawQuery, labels: Labels, model: Optional[Model]) -> PropertyQuery:
    formula = _inline_labels(raw.expr, labels)
    path = classify(formula)
    if model is not None:
        check_atoms(formula, model)
    if raw.bound is not None and not 0.0 <= raw.bound <= 1.0:
        raise UnsupportedPattern(f"probability bound {raw.bound} lies outside [0, 1]")
    text = raw.text
    if not text:
        bound = "=?" if raw.bound is None else f"{raw.op}{raw.bound}"
        text = f"P{bound} [ {print_expr(raw.expr)} ]"
    return PropertyQuery(op=raw.op, bound=raw.bound, formula=formula, path=path, name=raw.name, text=text)


def parse_property(
    text: str,
    model: Optional[Model] = None,
    labels: Optional[Labels] = None,
) -> PropertyQuery:
    """
    Parse one query such as ``P>=0.9 [ F robotState=handoverSuccessful ]``.

    When *model* is given every atom identifier must resolve against it.

    Raises:
        PropertySyntaxError, UnsupportedPattern, UnboundAtomIdentifier
    """
    return _to_query(parse_raw_query(text), labels or {}, model)


def _collect_labels(raw_labels: List[RawLabel]) -> Dict[str, Expr]:
    labels: Dict[str, Expr] = {}
    for raw in raw_labels:
        labels[raw.name] = _inline_labels(raw.expr, labels)
    return labels


def parse_property_file(text: str, model: Optional[Model] = None) -> List[PropertyQuery]:
    """Parse a .qry file: label definitions in order, then every query"""
    raw_labels, raw_queries = parse_raw_queryfile(text)
    labels = _collect_labels(raw_labels)
    queries = [_to_query(raw, labels, model) for raw in raw_queries]
    logger.debug(f"[Properties] Parsed {len(queries)} queries, {len(labels)} labels")
    return queries


def file_labels(text: str) -> Dict[str, Expr]:
    """Label definitions of a .qry file, each with earlier labels inlined"""
    raw_labels, _ = parse_raw_queryfile(text)
    return _collect_labels(raw_labels)


def load_properties(path: Union[str, Path], model: Optional[Model] = None) -> List[PropertyQuery]:
    return parse_property_file(Path(path).read_text(encoding="utf-8"), model)
