"""
Brute-force oracle: enumerates every path to an absorbing state and evaluates
the path formula directly on prefix·s^ω.

Shares nothing with the monitor construction; the checker is tested against
it.
"""

import logging
from typing import Dict, List, Mapping, Optional, Sequence

from chain.model import Chain, State
from config import settings
from errors import AtomResolutionError, PathCapExceeded
from modellang.ast import Binary, Expr, Model, Unary, Value
from modellang.constants import resolve_constants
from modellang.expressions import evaluate

from .formulas import PropertyQuery

logger = logging.getLogger(__name__)


def _truth(expr: Expr, word: Sequence[State], chain: Chain, consts: Mapping[str, Value]) -> List[bool]:
    """
    Truth value of *expr* at each position of a lasso word.

    The last position repeats forever, so position n is its own successor.
    """
    n = len(word) - 1

    if isinstance(expr, Unary) and expr.op in ("F", "G", "X", "!"):
        inner = _truth(expr.operand, word, chain, consts)
        if expr.op == "!":
            return [not v for v in inner]
        if expr.op == "X":
            return [inner[min(i + 1, n)] for i in range(n + 1)]
        out = [False] * (n + 1)
        running = inner[n]
        for i in range(n, -1, -1):
            running = (running or inner[i]) if expr.op == "F" else (running and inner[i])
            out[i] = running
        return out

    if isinstance(expr, Binary) and expr.op in ("U", "&", "|", "=>"):
        left = _truth(expr.left, word, chain, consts)
        right = _truth(expr.right, word, chain, consts)
        if expr.op == "&":
            return [a and b for a, b in zip(left, right)]
        if expr.op == "|":
            return [a or b for a, b in zip(left, right)]
        if expr.op == "=>":
            return [(not a) or b for a, b in zip(left, right)]
        # φ U ψ on the loop position holds iff ψ holds there
        out = [False] * (n + 1)
        out[n] = right[n]
        for i in range(n - 1, -1, -1):
            out[i] = right[i] or (left[i] and out[i + 1])
        return out

    values = []
    for state in word:
        env: Dict[str, Value] = dict(consts)
        env.update(zip(chain.variables, state))
        try:
            value = evaluate(expr, env)
        except Exception as exc:
            raise AtomResolutionError(str(exc)) from exc
        values.append(bool(value))
    return values


def brute_force_prob(
    chain: Chain,
    query: PropertyQuery,
    model: Optional[Model] = None,
    path_cap: Optional[int] = None,
) -> float:
    """
    Sum of probabilities of the absorbed paths satisfying the query's formula.

    Raises:
        PathCapExceeded: more than *path_cap* paths, or a transient cycle
                         (infinitely many paths)
    """
    path_cap = path_cap if path_cap is not None else settings.path_cap
    consts = resolve_constants(model) if model is not None else chain.constant_map

    total = 0.0
    n_paths = 0
    # (state indices so far, path probability)
    stack = [([chain.initial], 1.0)]
    while stack:
        path, prob = stack.pop()
        last = path[-1]
        if last in chain.absorbing:
            n_paths += 1
            if n_paths > path_cap:
                raise PathCapExceeded(f"more than {path_cap} paths to absorbing states")
            word = [chain.states[i] for i in path]
            if _truth(query.formula, word, chain, consts)[0]:
                total += prob
            continue
        on_path = set(path)
        for target, p in chain.rows[last]:
            if p <= 0.0:
                continue
            if target in on_path:
                raise PathCapExceeded(f"transient cycle through state {target}: path count is unbounded")
            stack.append((path + [target], prob * p))

    logger.debug(f"[Oracle] {n_paths} paths enumerated")
    return total
