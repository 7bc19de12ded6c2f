"""
Probability queries over six path-formula patterns on terminating chains
"""

from .checker import ProbResult, bound_holds, check
from .formulas import (
    Eventuality, Eventually, Globally, GloballyAny, NextSafety, PathFormula, PropertyQuery, Response, Until,
)
from .monitors import Monitor, compile_monitor
from .oracle import brute_force_prob
from .parser import classify, file_labels, load_properties, parse_property, parse_property_file
from .solver import ReachabilityResult, reachability_prob, solve_reachability

__all__ = [
    'ProbResult', 'bound_holds', 'check',
    'Eventuality', 'Eventually', 'Globally', 'GloballyAny', 'NextSafety', 'PathFormula',
    'PropertyQuery', 'Response', 'Until',
    'Monitor', 'compile_monitor',
    'brute_force_prob',
    'classify', 'file_labels', 'load_properties', 'parse_property', 'parse_property_file',
    'ReachabilityResult', 'reachability_prob', 'solve_reachability',
]
