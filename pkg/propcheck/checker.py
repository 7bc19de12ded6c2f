"""
Probability queries on terminating chains.

The chain is paired with the query's monitor (product construction); every
product configuration whose chain state is absorbing is final and accepting
when the monitor's lasso predicate holds. The query value is the probability
of reaching an accepting final configuration.
"""

import logging
import time
from collections import deque
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, Field

from chain.model import Chain
from chain.terminal import classify_terminal
from errors import AtomResolutionError, NonTerminatingChain
from modellang.ast import Model, Value
from modellang.constants import resolve_constants
from modellang.expressions import compile_expr
from modellang.printer import print_expr

from .formulas import PropertyQuery
from .monitors import Atoms, Monitor, compile_monitor
from .solver import solve_reachability

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-12


class ProbResult(BaseModel):
    """One checked property, in the order the result file prints it"""

    property: str = Field(..., description="Query as written")
    name: Optional[str] = Field(None, description="Query name from the property file")
    mode: str = Field(..., description="'query' or 'bound'")
    pattern: str
    probability: float = Field(..., ge=0.0, le=1.0 + 1e-9)
    verdict: Optional[bool] = Field(None, description="Bound comparison; absent for =? queries")
    solver: str
    residual: float
    states: int
    transitions: int
    product_states: int
    build_time_ms: Optional[float] = None
    wall_time_ms: Optional[float] = None


def bound_holds(op: str, bound: float, probability: float, tolerance: float = BOUND_TOLERANCE) -> bool:
    if op == ">=":
        return probability >= bound - tolerance
    if op == ">":
        return probability - bound > tolerance
    if op == "<=":
        return probability <= bound + tolerance
    if op == "<":
        return bound - probability > tolerance
    raise ValueError(f"'{op}' is not a bound operator")


def atom_table(chain: Chain, monitor: Monitor, consts: Mapping[str, Value]) -> List[Atoms]:
    """Atom valuation of every chain state, in state order"""

    def unbound(name: str) -> AtomResolutionError:
        return AtomResolutionError(f"atom identifier '{name}' is not a variable or constant of the chain")

    compiled = []
    for atom in monitor.atoms:
        fn = compile_expr(atom, chain.var_index, consts, on_unbound=unbound)
        if chain.states and not isinstance(fn(chain.states[0]), bool):
            raise AtomResolutionError(f"atom '{print_expr(atom)}' is not a truth value")
        compiled.append(fn)
    return [tuple(bool(fn(state)) for fn in compiled) for state in chain.states]


def product_chain(chain: Chain, monitor: Monitor, table: List[Atoms]) -> Tuple[Chain, List[int]]:
    """
    Chain × monitor.

    Returns the product (states are (chain state, monitor state) pairs) and the
    indices of its accepting final configurations.
    """
    index: Dict[Tuple[int, int], int] = {}
    pairs: List[Tuple[int, int]] = []
    rows: List[Tuple[Tuple[int, float], ...]] = []
    accepting: List[int] = []

    def visit(pair: Tuple[int, int]) -> int:
        if pair not in index:
            index[pair] = len(pairs)
            pairs.append(pair)
            queue.append(pair)
        return index[pair]

    queue = deque()
    start = chain.initial
    visit((start, monitor.step(monitor.initial, table[start])))

    while queue:
        state, m = queue.popleft()
        here = index[(state, m)]
        if state in chain.absorbing:
            rows.append(((here, 1.0),))
            if monitor.lasso(m, table[state]):
                accepting.append(here)
            continue
        row = []
        for target, prob in chain.rows[state]:
            row.append((visit((target, monitor.step(m, table[target]))), prob))
        rows.append(tuple(row))

    product = Chain.from_rows(rows, initial=0, variables=("state", "monitor"), states=pairs)
    return product, accepting


def check(
    chain: Chain,
    query: PropertyQuery,
    model: Optional[Model] = None,
    method: str = "vi",
    timings: bool = False,
    build_time_ms: Optional[float] = None,
) -> ProbResult:
    """
    Evaluate *query* on *chain*.

    Constants in atoms resolve against *model* when given, otherwise against
    the binding the chain was built with.

    Raises:
        NonTerminatingChain, AtomResolutionError
    """
    started = time.perf_counter()
    report = classify_terminal(chain)
    if not report.terminating:
        raise NonTerminatingChain(
            f"{len(report.offending)} bottom component(s) are not absorbing states, "
            f"e.g. states {list(report.offending[0])[:10]}"
        )

    consts = resolve_constants(model) if model is not None else chain.constant_map
    monitor = compile_monitor(query.path)
    table = atom_table(chain, monitor, consts)
    product, accepting = product_chain(chain, monitor, table)
    solved = solve_reachability(product, accepting, method=method)
    probability = min(max(solved.at(product.initial), 0.0), 1.0 + 1e-9)

    verdict = None
    if query.mode == "bound":
        verdict = bound_holds(query.op, query.bound, probability)

    elapsed_ms = (time.perf_counter() - started) * 1000.0
    status = "" if verdict is None else (" ✅" if verdict else " ❌")
    logger.info(f"[Check] {query.name or query.describe()}: {probability!r}{status}")

    return ProbResult(
        property=query.describe(),
        name=query.name,
        mode=query.mode,
        pattern=monitor.pattern,
        probability=probability,
        verdict=verdict,
        solver=method,
        residual=solved.residual,
        states=chain.n_states,
        transitions=chain.n_transitions,
        product_states=product.n_states,
        build_time_ms=build_time_ms if timings else None,
        wall_time_ms=round(elapsed_ms, 3) if timings else None,
    )
