"""
Lark front end for model files and property files.
"""

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from errors import ModelSyntaxError, PropertySyntaxError
from modellang.ast import (
    Assignment, Binary, BoolLit, Branch, Command, ConstantDef, Expr, FloatLit,
    Ident, IntLit, LabelRef, Model, ModuleDef, Unary, VarDecl,
)
from modellang.constants import resolve_constants
from modellang.validate import validate_model, variable_domains

logger = logging.getLogger(__name__)

GRAMMAR_PATH = Path(__file__).with_name("grammar.lark")

# Friendly spellings for terminal names in diagnostics
_TOKEN_NAMES = {
    "_ARROW": "'->'", "_IMPLIES": "'=>'", "_AND": "'&'", "_OR": "'|'", "_NOT": "'!'",
    "_EQ": "'='", "_NEQ": "'!='", "_LE": "'<='", "_GE": "'>='", "_LT": "'<'", "_GT": "'>'",
    "_PLUS": "'+'", "_MINUS": "'-'", "_DOTDOT": "'..'", "SEMICOLON": "';'", "COLON": "':'",
    "LPAR": "'('", "RPAR": "')'", "LSQB": "'['", "RSQB": "']'", "QUOTE": "\"'\"",
    "NAME": "identifier", "INT": "integer", "FLOAT": "number", "ESCAPED_STRING": "string",
}


@dataclass(frozen=True)
class RawQuery:
    """A query as written: bound operator ('=?' for queries) plus the path expression"""
    op: str
    bound: Optional[float]
    expr: Expr
    name: Optional[str] = None
    text: str = ""
    span: Optional[Tuple[int, int]] = None


@dataclass(frozen=True)
class RawLabel:
    name: str
    expr: Expr


@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(
        GRAMMAR_PATH.read_text(encoding="utf-8"),
        parser="lalr",
        start=["model", "queryfile", "query", "expr"],
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _unquote(token: Token) -> str:
    return str(token)[1:-1]


@v_args(inline=True)
class _ToAst(Transformer):
    """Turns the parse tree into modellang.ast nodes"""

    # Literals and names
    def int_lit(self, token):
        return IntLit(int(token))

    def float_lit(self, token):
        return FloatLit(float(token))

    def true_lit(self):
        return BoolLit(True)

    def false_lit(self):
        return BoolLit(False)

    def ident(self, token):
        return Ident(str(token))

    def label_ref(self, token):
        return LabelRef(_unquote(token))

    # Operators
    def neg(self, operand):
        return Unary("-", operand)

    def not_(self, operand):
        return Unary("!", operand)

    def eventually(self, operand):
        return Unary("F", operand)

    def globally(self, operand):
        return Unary("G", operand)

    def next_(self, operand):
        return Unary("X", operand)

    def implies(self, left, right):
        return Binary("=>", left, right)

    def or_(self, left, right):
        return Binary("|", left, right)

    def and_(self, left, right):
        return Binary("&", left, right)

    def until(self, left, right):
        return Binary("U", left, right)

    def eq(self, left, right):
        return Binary("=", left, right)

    def neq(self, left, right):
        return Binary("!=", left, right)

    def lt(self, left, right):
        return Binary("<", left, right)

    def le(self, left, right):
        return Binary("<=", left, right)

    def gt(self, left, right):
        return Binary(">", left, right)

    def ge(self, left, right):
        return Binary(">=", left, right)

    def add(self, left, right):
        return Binary("+", left, right)

    def sub(self, left, right):
        return Binary("-", left, right)

    def mul(self, left, right):
        return Binary("*", left, right)

    def div(self, left, right):
        return Binary("/", left, right)

    # Model structure
    def kind_int(self):
        return "int"

    def kind_double(self):
        return "double"

    def kind_bool(self):
        return "bool"

    def constant(self, kind, name, expr):
        return ConstantDef(str(name), kind, expr)

    def init(self, expr):
        return expr

    def int_var(self, name, lo, hi, init=None):
        return VarDecl(str(name), "int", lo, hi, init)

    def bool_var(self, name, init=None):
        return VarDecl(str(name), "bool", None, None, init)

    def update(self, name, expr):
        return Assignment(str(name), expr)

    @v_args(inline=False)
    def updates(self, children):
        return tuple(children)

    def prob_branch(self, prob, updates):
        return Branch(prob, updates)

    def sure_branch(self, updates):
        return Branch(None, updates)

    @v_args(inline=False)
    def branches(self, children):
        return tuple(children)

    def no_update(self):
        return (Branch(None, ()),)

    def command(self, label, guard, branches):
        return Command(str(label) if label is not None else None, guard, branches)

    def module(self, name, *items):
        variables = tuple(item for item in items if isinstance(item, VarDecl))
        commands = tuple(item for item in items if isinstance(item, Command))
        return ModuleDef(str(name), variables, commands)

    @v_args(inline=False)
    def model(self, children):
        return children

    # Properties
    def bound_query(self):
        return ("=?", None)

    def bound_ge(self, number):
        return (">=", float(number))

    def bound_gt(self, number):
        return (">", float(number))

    def bound_le(self, number):
        return ("<=", float(number))

    def bound_lt(self, number):
        return ("<", float(number))

    @v_args(meta=True, inline=True)
    def query(self, meta, bound, expr):
        op, value = bound
        span = None if meta.empty else (meta.start_pos, meta.end_pos)
        return RawQuery(op, value, expr, span=span)

    def named_query(self, name, query):
        return RawQuery(query.op, query.bound, query.expr, _unquote(name), query.text, query.span)

    def label_def(self, name, expr):
        return RawLabel(_unquote(name), expr)

    @v_args(inline=False)
    def queryfile(self, children):
        return children


def _describe_expected(expected) -> List[str]:
    return sorted({_TOKEN_NAMES.get(name, name.strip("_").lower() if name.isupper() else name) for name in expected})


def _raise_syntax(exc: UnexpectedInput, error_cls) -> None:
    if isinstance(exc, UnexpectedToken):
        found = "end of input" if exc.token.type == "$END" else repr(str(exc.token))
        raise error_cls(f"unexpected {found}", exc.line, exc.column, _describe_expected(exc.expected)) from None
    if isinstance(exc, UnexpectedCharacters):
        raise error_cls(f"unexpected character {exc.char!r}", exc.line, exc.column,
                        _describe_expected(exc.allowed or ())) from None
    if isinstance(exc, UnexpectedEOF):
        raise error_cls("unexpected end of input", getattr(exc, "line", -1), getattr(exc, "column", -1),
                        _describe_expected(exc.expected)) from None
    raise error_cls(str(exc), getattr(exc, "line", -1), getattr(exc, "column", -1)) from None


def _parse(text: str, start: str, error_cls):
    try:
        tree = _parser().parse(text, start=start)
    except UnexpectedInput as exc:
        _raise_syntax(exc, error_cls)
    return _ToAst().transform(tree)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def parse_model(text: str, name: str = "model") -> Model:
    """
    Parse and validate model source text.

    Args:
        text: model source in the guarded-command language
        name: model name (file stem when loaded from disk)

    Returns:
        Validated Model

    Raises:
        ModelSyntaxError, DuplicateName, UnboundIdentifier, DuplicateAssignment
    """
    items = _parse(text, "model", ModelSyntaxError)
    constants = tuple(item for item in items if isinstance(item, ConstantDef))
    modules = tuple(item for item in items if isinstance(item, ModuleDef))
    model = Model(name=name, constants=constants, modules=modules)
    validate_model(model)
    variable_domains(model, resolve_constants(model))
    logger.debug(f"[Parser] Parsed model '{name}': {len(constants)} constants, {len(modules)} modules")
    return model


def load_model(path: Union[str, Path]) -> Model:
    path = Path(path)
    return parse_model(path.read_text(encoding="utf-8"), name=path.stem)


def parse_expr(text: str) -> Expr:
    return _parse(text, "expr", ModelSyntaxError)


def parse_raw_query(text: str) -> RawQuery:
    query = _parse(text, "query", PropertySyntaxError)
    return RawQuery(query.op, query.bound, query.expr, query.name, text.strip())


def _source_slice(source: str, span: Optional[Tuple[int, int]]) -> str:
    """Text of one query, from its 'P' up to the closing ']'"""
    if span is None:
        return ""
    start, end = span
    start = source.rfind("P", 0, start + 1)
    close = source.rfind("]", start, end)
    if close < 0:
        close = source.find("]", end)
    if start < 0 or close < 0:
        return ""
    return " ".join(source[start:close + 1].split())


def parse_raw_queryfile(text: str) -> Tuple[List[RawLabel], List[RawQuery]]:
    """Split a property file into label definitions and queries, keeping source text per query"""
    items = _parse(text, "queryfile", PropertySyntaxError)
    labels = [item for item in items if isinstance(item, RawLabel)]
    queries = [
        replace(item, text=_source_slice(text, item.span))
        for item in items if isinstance(item, RawQuery)
    ]
    return labels, queries
