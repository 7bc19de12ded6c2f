"""
Chain Builder - composes a Model into an explicit-state DTMC

Alternatives enabled in a state:
    1. every unlabeled enabled command, acting alone
    2. per label L, one joint command for each combination of enabled
       L-commands across all modules that declare L (blocking semantics)

A state with no alternative gets a probability-1 self-loop.
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from config import settings
from errors import (
    ConflictingAssignment, DomainViolation, InvalidBranchProbabilities,
    NondeterministicState, StateSpaceLimitExceeded,
)
from modellang.ast import Model, Value
from modellang.constants import resolve_constants
from modellang.expressions import StateFn, compile_expr, evaluate
from modellang.validate import variable_domains

from .model import ROW_TOLERANCE, Chain, State

logger = logging.getLogger(__name__)

POLICIES = ("reject", "uniform")

# (slot, update function) pairs of one branch
Update = Tuple[Tuple[int, StateFn], ...]


@dataclass(frozen=True)
class _CompiledCommand:
    uid: int
    module: str
    label: Optional[str]
    guard: StateFn
    branches: Tuple[Tuple[float, Update], ...]
    written: Tuple[frozenset, ...]  # variable slots per branch

    @property
    def name(self) -> str:
        return f"{self.module}#{self.uid}"


class ChainBuilder:
    """
    Breadth-first explorer over a model's reachable valuations.

    Usage:
        chain = ChainBuilder(model).build()
    """

    def __init__(self, model: Model, policy: str = "reject", state_cap: Optional[int] = None):
        if policy not in POLICIES:
            raise ValueError(f"unknown nondeterminism policy '{policy}' (expected one of {POLICIES})")
        self.model = model
        self.policy = policy
        self.state_cap = state_cap if state_cap is not None else settings.state_cap

        self.consts = resolve_constants(model)
        self.domains = variable_domains(model, self.consts)
        self.variables: Tuple[str, ...] = tuple(var.name for var in model.variables)
        self.var_index: Dict[str, int] = {name: i for i, name in enumerate(self.variables)}
        self.kinds: Tuple[str, ...] = tuple(var.kind for var in model.variables)

        self.unlabeled: List[_CompiledCommand] = []
        # label -> one list of commands per declaring module
        self.synchronised: Dict[str, List[List[_CompiledCommand]]] = {}
        self._joint_cache: Dict[Tuple[int, ...], Tuple[Tuple[float, Update], ...]] = {}
        self._compile()

    # ── Compilation ──────────────────────────────────────────────────────────

    def _compile(self) -> None:
        uid = 0
        for module in self.model.modules:
            per_label: Dict[str, List[_CompiledCommand]] = {}
            for command in module.commands:
                uid += 1
                branches = []
                written = []
                for branch in command.branches:
                    prob = 1.0 if branch.prob is None else evaluate(branch.prob, self.consts)
                    if isinstance(prob, bool) or not 0.0 <= float(prob) <= 1.0:
                        raise InvalidBranchProbabilities(
                            f"module '{module.name}' command {uid}: branch probability {prob!r} outside [0, 1]"
                        )
                    update = tuple(
                        (self.var_index[a.var], compile_expr(a.expr, self.var_index, self.consts))
                        for a in branch.assignments
                    )
                    branches.append((float(prob), update))
                    written.append(frozenset(slot for slot, _ in update))

                total = sum(prob for prob, _ in branches)
                if abs(total - 1.0) > ROW_TOLERANCE:
                    raise InvalidBranchProbabilities(
                        f"module '{module.name}' command {uid}: branch probabilities sum to {total!r}, not 1"
                    )

                compiled = _CompiledCommand(
                    uid=uid,
                    module=module.name,
                    label=command.label,
                    guard=compile_expr(command.guard, self.var_index, self.consts),
                    branches=tuple(branches),
                    written=tuple(written),
                )
                if command.label is None:
                    self.unlabeled.append(compiled)
                else:
                    per_label.setdefault(command.label, []).append(compiled)

            for label, commands in per_label.items():
                self.synchronised.setdefault(label, []).append(commands)

    # ── Exploration ──────────────────────────────────────────────────────────

    def _joint_branches(self, combo: Sequence[_CompiledCommand]) -> Tuple[Tuple[float, Update], ...]:
        key = tuple(command.uid for command in combo)
        cached = self._joint_cache.get(key)
        if cached is not None:
            return cached

        joint = []
        for picks in itertools.product(*(range(len(command.branches)) for command in combo)):
            prob = 1.0
            written: set = set()
            update: List[Tuple[int, StateFn]] = []
            for command, pick in zip(combo, picks):
                branch_prob, branch_update = command.branches[pick]
                prob *= branch_prob
                overlap = written & command.written[pick]
                if overlap:
                    names = ", ".join(sorted(self.variables[slot] for slot in overlap))
                    raise ConflictingAssignment(
                        f"[{combo[0].label}] synchronised modules both write {names}"
                    )
                written |= command.written[pick]
                update.extend(branch_update)
            if prob > 0.0:
                joint.append((prob, tuple(update)))

        result = tuple(joint)
        self._joint_cache[key] = result
        return result

    def _alternatives(self, state: State) -> List[Tuple[str, Tuple[Tuple[float, Update], ...]]]:
        alternatives = []
        for command in self.unlabeled:
            if command.guard(state):
                branches = tuple((p, u) for p, u in command.branches if p > 0.0)
                alternatives.append((command.name, branches))

        for label, modules in self.synchronised.items():
            enabled = []
            for commands in modules:
                ready = [command for command in commands if command.guard(state)]
                if not ready:
                    break
                enabled.append(ready)
            else:
                for combo in itertools.product(*enabled):
                    description = f"[{label}] " + " + ".join(command.name for command in combo)
                    alternatives.append((description, self._joint_branches(combo)))
        return alternatives

    def _apply(self, state: State, update: Update) -> State:
        values = list(state)
        for slot, fn in update:
            values[slot] = self._coerce(slot, fn(state))
        return tuple(values)

    def _coerce(self, slot: int, value: Value) -> Value:
        name = self.variables[slot]
        lo, hi, _ = self.domains[name]
        if self.kinds[slot] == "bool":
            if not isinstance(value, bool):
                raise DomainViolation(f"bool variable '{name}' assigned {value!r}")
            return value
        if isinstance(value, bool) or not float(value).is_integer():
            raise DomainViolation(f"int variable '{name}' assigned {value!r}")
        value = int(value)
        if not lo <= value <= hi:
            raise DomainViolation(f"update sets '{name}' to {value}, outside [{lo}..{hi}]")
        return value

    def initial_state(self) -> State:
        return tuple(self.domains[name][2] for name in self.variables)

    def build(self) -> Chain:
        initial = self.initial_state()
        index: Dict[State, int] = {initial: 0}
        states: List[State] = [initial]
        rows: List[Tuple[Tuple[int, float], ...]] = []
        absorbing = set()
        queue = deque([initial])

        while queue:
            state = queue.popleft()
            source = index[state]
            alternatives = self._alternatives(state)

            if not alternatives:
                absorbing.add(source)
                rows.append(((source, 1.0),))
                continue

            if len(alternatives) > 1 and self.policy == "reject":
                raise NondeterministicState(
                    dict(zip(self.variables, state)),
                    [description for description, _ in alternatives],
                )

            weight = 1.0 / len(alternatives)
            row: Dict[int, float] = {}
            for _, branches in alternatives:
                for prob, update in branches:
                    target = self._apply(state, update)
                    if target not in index:
                        if len(states) >= self.state_cap:
                            raise StateSpaceLimitExceeded(
                                f"more than {self.state_cap} reachable states (raise ASSUREKIT_STATE_CAP)"
                            )
                        index[target] = len(states)
                        states.append(target)
                        queue.append(target)
                    target_index = index[target]
                    row[target_index] = row.get(target_index, 0.0) + prob * weight

            total = sum(row.values())
            if abs(total - 1.0) > ROW_TOLERANCE:
                raise InvalidBranchProbabilities(
                    f"outgoing probability of state {dict(zip(self.variables, state))} sums to {total!r}"
                )
            if len(row) == 1 and source in row:
                absorbing.add(source)
            # Rows are filled in BFS order, so rows[i] always belongs to states[i]
            rows.append(tuple(row.items()))

        chain = Chain(
            variables=self.variables,
            states=tuple(states),
            rows=tuple(rows),
            initial=0,
            absorbing=frozenset(absorbing),
            constants=tuple(self.consts.items()),
        )
        logger.info(
            f"[Chain] ✅ Built '{self.model.name}': {chain.n_states} states, "
            f"{chain.n_transitions} transitions, {len(absorbing)} absorbing"
        )
        return chain


def build_chain(model: Model, policy: str = "reject", state_cap: Optional[int] = None) -> Chain:
    """Compose *model* into a DTMC (see ChainBuilder)"""
    return ChainBuilder(model, policy=policy, state_cap=state_cap).build()
