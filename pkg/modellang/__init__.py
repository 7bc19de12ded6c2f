"""
Guarded-command modelling language: parsing, validation, evaluation, printing
"""

from .ast import Model, ModuleDef, Command, Branch, Assignment, ConstantDef, VarDecl
from .constants import ConstantSet, constant_pairs, resolve_constants, set_constants
from .expressions import compile_expr, eval_expr
from .parser import load_model, parse_expr, parse_model
from .printer import print_expr, print_model

__all__ = [
    'Model', 'ModuleDef', 'Command', 'Branch', 'Assignment', 'ConstantDef', 'VarDecl',
    'ConstantSet', 'constant_pairs', 'resolve_constants', 'set_constants',
    'compile_expr', 'eval_expr',
    'load_model', 'parse_expr', 'parse_model',
    'print_expr', 'print_model',
]
