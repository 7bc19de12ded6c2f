"""
Termination structure of a chain: bottom strongly connected components.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from .model import Chain

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TerminationReport:
    terminating: bool
    bottom_components: Tuple[Tuple[int, ...], ...] = ()
    offending: Tuple[Tuple[int, ...], ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "terminating": self.terminating,
            "bottom_components": [list(c) for c in self.bottom_components],
            "offending": [list(c) for c in self.offending],
        }


def classify_terminal(chain: Chain) -> TerminationReport:
    """
    A chain is terminating when every bottom SCC is a single absorbing state.

    Offending components are the bottom SCCs that are not, each listed as
    sorted state indices.
    """
    if chain.n_states == 0:
        return TerminationReport(terminating=True)

    matrix = chain.to_csr()
    n_components, labels = connected_components(matrix, directed=True, connection="strong")

    # A component is bottom iff no edge leaves it
    leaves = np.zeros(n_components, dtype=bool)
    coo = matrix.tocoo()
    for source, target, prob in zip(coo.row, coo.col, coo.data):
        if prob > 0.0 and labels[source] != labels[target]:
            leaves[labels[source]] = True

    members: List[List[int]] = [[] for _ in range(n_components)]
    for state, component in enumerate(labels):
        members[component].append(state)

    bottom = []
    offending = []
    for component in range(n_components):
        if leaves[component]:
            continue
        states = tuple(sorted(members[component]))
        bottom.append(states)
        if len(states) != 1 or states[0] not in chain.absorbing:
            offending.append(states)

    bottom.sort()
    offending.sort()
    report = TerminationReport(
        terminating=not offending,
        bottom_components=tuple(bottom),
        offending=tuple(offending),
    )
    if offending:
        logger.warning(f"[Chain] ⚠️ {len(offending)} non-absorbing bottom component(s)")
    return report
