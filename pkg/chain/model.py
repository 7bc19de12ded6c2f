"""
Explicit-state discrete-time Markov chain.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import numpy as np
from scipy import sparse

from modellang.ast import Value

Row = Tuple[Tuple[int, float], ...]
State = Tuple[Value, ...]

ROW_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Chain:
    """
    Immutable DTMC.

    States are dense valuations ordered by variable declaration; rows hold
    (target, probability) pairs. Absorbing states carry one probability-1
    self-loop. ``constants`` keeps the binding the chain was built under so
    atoms can be resolved without the model.
    """

    variables: Tuple[str, ...]
    states: Tuple[State, ...]
    rows: Tuple[Row, ...]
    initial: int = 0
    absorbing: FrozenSet[int] = frozenset()
    constants: Tuple[Tuple[str, Value], ...] = field(default=(), compare=False)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_transitions(self) -> int:
        return sum(len(row) for row in self.rows)

    @cached_property
    def index(self) -> Dict[State, int]:
        return {state: i for i, state in enumerate(self.states)}

    @cached_property
    def var_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.variables)}

    @property
    def constant_map(self) -> Dict[str, Value]:
        return dict(self.constants)

    def valuation(self, state: int) -> Dict[str, Value]:
        return dict(zip(self.variables, self.states[state]))

    def successors(self, state: int) -> Row:
        return self.rows[state]

    def to_csr(self) -> sparse.csr_matrix:
        """Transition matrix as scipy CSR (n × n)"""
        n = self.n_states
        sources: List[int] = []
        targets: List[int] = []
        probs: List[float] = []
        for source, row in enumerate(self.rows):
            for target, prob in row:
                sources.append(source)
                targets.append(target)
                probs.append(prob)
        return sparse.csr_matrix(
            (np.asarray(probs, dtype=float), (np.asarray(sources, dtype=np.int64), np.asarray(targets, dtype=np.int64))),
            shape=(n, n),
        )

    def states_where(self, predicate) -> FrozenSet[int]:
        """Indices of states whose valuation dict satisfies *predicate*"""
        return frozenset(i for i in range(self.n_states) if predicate(self.valuation(i)))

    @classmethod
    def from_rows(
        cls,
        rows: Sequence[Iterable[Tuple[int, float]]],
        initial: int = 0,
        variables: Tuple[str, ...] = ("s",),
        states: Sequence[State] = (),
    ) -> "Chain":
        """
        Build a chain directly from transition rows (used for hand-made and
        randomly generated chains). States default to ``(i,)``; a row that is
        exactly one self-loop of probability 1 marks the state absorbing.
        """
        frozen_rows = tuple(tuple((int(t), float(p)) for t, p in row) for row in rows)
        absorbing = frozenset(
            i for i, row in enumerate(frozen_rows)
            if len(row) == 1 and row[0][0] == i and abs(row[0][1] - 1.0) <= ROW_TOLERANCE
        )
        if not states:
            states = tuple((i,) for i in range(len(frozen_rows)))
        return cls(
            variables=tuple(variables),
            states=tuple(tuple(s) for s in states),
            rows=frozen_rows,
            initial=initial,
            absorbing=absorbing,
        )

    def with_constants(self, constants: Mapping[str, Value]) -> "Chain":
        return Chain(self.variables, self.states, self.rows, self.initial, self.absorbing, tuple(constants.items()))
