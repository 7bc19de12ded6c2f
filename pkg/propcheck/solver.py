"""
Reachability probabilities on an explicit DTMC.

Graph precomputation removes the states that cannot reach the target set
(their probability is 0); the remaining unknowns satisfy x = A·x + b, solved
either by value iteration or exactly with a sparse LU solve.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from chain.model import Chain
from config import settings
from errors import NumericalNonConvergence

logger = logging.getLogger(__name__)

METHODS = ("vi", "exact")


@dataclass(frozen=True)
class ReachabilityResult:
    values: np.ndarray
    method: str
    residual: float
    sweeps: int = 0

    def at(self, state: int) -> float:
        return float(self.values[state])


def can_reach(chain: Chain, targets: Iterable[int]) -> np.ndarray:
    """Boolean mask of states with a path (of positive probability) into *targets*"""
    predecessors: List[List[int]] = [[] for _ in range(chain.n_states)]
    for source, row in enumerate(chain.rows):
        for target, prob in row:
            if prob > 0.0:
                predecessors[target].append(source)

    mask = np.zeros(chain.n_states, dtype=bool)
    queue = deque()
    for target in targets:
        if not mask[target]:
            mask[target] = True
            queue.append(target)
    while queue:
        state = queue.popleft()
        for source in predecessors[state]:
            if not mask[source]:
                mask[source] = True
                queue.append(source)
    return mask


def solve_reachability(
    chain: Chain,
    targets: Iterable[int],
    method: str = "vi",
    residual: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> ReachabilityResult:
    """
    x[s] = P(reach targets from s).

    Args:
        method: "vi" (value iteration until the max update is below *residual*)
                or "exact" (spsolve on the transient submatrix)

    Raises:
        NumericalNonConvergence: value iteration hit *max_sweeps*
    """
    if method not in METHODS:
        raise ValueError(f"unknown solver method '{method}' (expected one of {METHODS})")
    residual = residual if residual is not None else settings.vi_residual
    max_sweeps = max_sweeps if max_sweeps is not None else settings.vi_max_sweeps

    n = chain.n_states
    target_mask = np.zeros(n, dtype=bool)
    target_mask[np.fromiter(targets, dtype=np.int64)] = True
    reach = can_reach(chain, np.flatnonzero(target_mask))
    unknown = np.flatnonzero(reach & ~target_mask)

    values = np.zeros(n, dtype=float)
    values[target_mask] = 1.0
    if unknown.size == 0:
        return ReachabilityResult(values, method, 0.0)

    matrix = chain.to_csr()
    sub = matrix[unknown][:, unknown].tocsr()
    b = np.asarray(matrix[unknown][:, np.flatnonzero(target_mask)].sum(axis=1)).ravel()

    if method == "exact":
        system = (sparse.identity(unknown.size, format="csc") - sub.tocsc())
        x = np.atleast_1d(spsolve(system, b))
        final_residual = float(np.max(np.abs(system @ x - b))) if x.size else 0.0
        values[unknown] = x
        logger.debug(f"[Solver] Exact solve over {unknown.size} unknowns, residual {final_residual:.3e}")
        return ReachabilityResult(values, method, final_residual)

    x = np.zeros(unknown.size, dtype=float)
    for sweep in range(1, max_sweeps + 1):
        updated = sub @ x + b
        delta = float(np.max(np.abs(updated - x)))
        x = updated
        if delta < residual:
            values[unknown] = x
            logger.debug(f"[Solver] Value iteration converged after {sweep} sweeps (Δ={delta:.3e})")
            return ReachabilityResult(values, method, delta, sweep)

    raise NumericalNonConvergence(
        f"value iteration did not reach residual {residual} within {max_sweeps} sweeps"
    )


def reachability_prob(
    chain: Chain,
    targets: Iterable[int],
    method: str = "vi",
    residual: Optional[float] = None,
    max_sweeps: Optional[int] = None,
) -> np.ndarray:
    """Probability vector of reaching *targets*; see solve_reachability"""
    return solve_reachability(chain, targets, method, residual, max_sweeps).values
