"""
Explicit-state Markov chain construction and termination analysis
"""

from .builder import ChainBuilder, build_chain
from .dump import chain_to_dict, dump_chain
from .model import Chain
from .terminal import TerminationReport, classify_terminal

__all__ = [
    'Chain', 'ChainBuilder', 'build_chain',
    'TerminationReport', 'classify_terminal',
    'chain_to_dict', 'dump_chain',
]
