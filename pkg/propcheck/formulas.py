"""
Typed probability queries and the six supported path-formula patterns.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from modellang.ast import Expr
from modellang.printer import print_expr

SUPPORTED_PATTERNS = (
    "F φ",
    "G φ",
    "G (φ => F ψ)",
    "G (φ => !X ψ)",
    "φ U ψ",
    "G (F φ1 | F (φ2 U ψ2) | ...)",
)


@dataclass(frozen=True)
class Eventually:
    phi: Expr

    pattern = "Eventually"


@dataclass(frozen=True)
class Globally:
    phi: Expr

    pattern = "Globally"


@dataclass(frozen=True)
class Response:
    """G(φ ⇒ F ψ)"""
    phi: Expr
    psi: Expr

    pattern = "Response"


@dataclass(frozen=True)
class NextSafety:
    """G(φ ⇒ ¬X ψ)"""
    phi: Expr
    psi: Expr

    pattern = "NextSafety"


@dataclass(frozen=True)
class Until:
    phi: Expr
    psi: Expr

    pattern = "Until"


@dataclass(frozen=True)
class Eventuality:
    """F φ when psi is None, otherwise F(φ U ψ)"""
    phi: Expr
    psi: Optional[Expr] = None


@dataclass(frozen=True)
class GloballyAny:
    """G(E1 ∨ E2 ∨ ...) over eventualities"""
    eventualities: Tuple[Eventuality, ...]

    pattern = "GloballyAny"


PathFormula = Union[Eventually, Globally, Response, NextSafety, Until, GloballyAny]


@dataclass(frozen=True)
class PropertyQuery:
    """
    P=? [path] or P~b [path].

    ``formula`` is the path expression with label references inlined; it is
    what the brute-force oracle evaluates. ``path`` is the recognised pattern.
    """

    op: str  # "=?" | ">=" | ">" | "<=" | "<"
    bound: Optional[float]
    formula: Expr
    path: PathFormula
    name: Optional[str] = None
    text: str = ""

    @property
    def mode(self) -> str:
        return "query" if self.op == "=?" else "bound"

    def describe(self) -> str:
        if self.text:
            return self.text
        bound = "=?" if self.bound is None else f"{self.op}{self.bound}"
        return f"P{bound} [ {print_expr(self.formula)} ]"
