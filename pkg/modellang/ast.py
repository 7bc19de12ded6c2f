"""
Typed in-memory representation of guarded-command models.

Expressions are a small immutable tree. Binary and unary nodes carry the
operator as text so the evaluator, the printer and the property compiler can
dispatch on one table.
"""

from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union

# Operators that only make sense in property files
TEMPORAL_UNARY = frozenset({"F", "G", "X"})
TEMPORAL_BINARY = frozenset({"U"})

BINARY_OPS = ("=>", "|", "&", "U", "=", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/")
UNARY_OPS = ("!", "-", "F", "G", "X")


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class FloatLit:
    value: float


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class LabelRef:
    """Reference to a property-file label, written "name" in source"""
    name: str


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[IntLit, FloatLit, BoolLit, Ident, LabelRef, Unary, Binary]
Value = Union[int, float, bool]


def walk(expr: Expr) -> Iterator[Expr]:
    """Pre-order traversal of an expression tree"""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Binary):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, Unary):
            stack.append(node.operand)


def identifiers(expr: Expr) -> Tuple[str, ...]:
    return tuple(node.name for node in walk(expr) if isinstance(node, Ident))


def is_temporal(expr: Expr) -> bool:
    for node in walk(expr):
        if isinstance(node, Unary) and node.op in TEMPORAL_UNARY:
            return True
        if isinstance(node, Binary) and node.op in TEMPORAL_BINARY:
            return True
    return False


# ── Model structure ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ConstantDef:
    name: str
    kind: str  # "int" | "double" | "bool"
    expr: Expr


@dataclass(frozen=True)
class VarDecl:
    name: str
    kind: str  # "int" | "bool"
    lo: Optional[Expr] = None
    hi: Optional[Expr] = None
    init: Optional[Expr] = None


@dataclass(frozen=True)
class Assignment:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Branch:
    prob: Optional[Expr]  # None means probability 1
    assignments: Tuple[Assignment, ...]


@dataclass(frozen=True)
class Command:
    label: Optional[str]
    guard: Expr
    branches: Tuple[Branch, ...]


@dataclass(frozen=True)
class ModuleDef:
    name: str
    variables: Tuple[VarDecl, ...] = ()
    commands: Tuple[Command, ...] = ()

    @property
    def labels(self) -> Tuple[str, ...]:
        seen = []
        for command in self.commands:
            if command.label is not None and command.label not in seen:
                seen.append(command.label)
        return tuple(seen)


@dataclass(frozen=True)
class Model:
    name: str
    constants: Tuple[ConstantDef, ...] = ()
    modules: Tuple[ModuleDef, ...] = field(default_factory=tuple)

    def constant(self, name: str) -> Optional[ConstantDef]:
        for const in self.constants:
            if const.name == name:
                return const
        return None

    def module(self, name: str) -> Optional[ModuleDef]:
        for module in self.modules:
            if module.name == name:
                return module
        return None

    @property
    def variables(self) -> Tuple[VarDecl, ...]:
        """All variables in declaration order (module order, then local order)"""
        return tuple(var for module in self.modules for var in module.variables)

    @property
    def labels(self) -> Tuple[str, ...]:
        seen = []
        for module in self.modules:
            for label in module.labels:
                if label not in seen:
                    seen.append(label)
        return tuple(seen)
