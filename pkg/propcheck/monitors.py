"""
Deterministic monitors for the six path-formula patterns.

A monitor reads the atom valuation of every visited chain state, the first
visit of the absorbing state included. Once the path is absorbed, the lasso
predicate decides acceptance of prefix·s^ω from the final monitor state and
the atoms of the absorbing state s.

Atoms are numbered; a valuation is a tuple of bools in that order.
"""

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

from modellang.ast import Expr

from .formulas import Eventually, Globally, GloballyAny, NextSafety, PathFormula, Response, Until

Atoms = Tuple[bool, ...]


@dataclass(frozen=True)
class Monitor:
    pattern: str
    atoms: Tuple[Expr, ...]
    states: Tuple[str, ...]
    initial: int
    step: Callable[[int, Atoms], int]
    lasso: Callable[[int, Atoms], bool]

    def run(self, trace: Sequence[Atoms]) -> int:
        state = self.initial
        for atoms in trace:
            state = self.step(state, atoms)
        return state

    def accepts(self, trace: Sequence[Atoms]) -> bool:
        """Verdict on a finite trace whose last entry is the absorbing state"""
        if not trace:
            raise ValueError("a trace needs at least the absorbing state")
        return self.lasso(self.run(trace), trace[-1])


def _eventually(path: Eventually) -> Monitor:
    pending, accepted = 0, 1

    def step(m: int, a: Atoms) -> int:
        return accepted if m == accepted or a[0] else pending

    def lasso(m: int, a: Atoms) -> bool:
        return m == accepted or a[0]

    return Monitor("Eventually", (path.phi,), ("pending", "accepted"), pending, step, lasso)


def _globally(path: Globally) -> Monitor:
    ok, violated = 0, 1

    def step(m: int, a: Atoms) -> int:
        return violated if m == violated or not a[0] else ok

    def lasso(m: int, a: Atoms) -> bool:
        return m == ok and a[0]

    return Monitor("Globally", (path.phi,), ("ok", "violated"), ok, step, lasso)


def _response(path: Response) -> Monitor:
    idle, pending = 0, 1

    def step(m: int, a: Atoms) -> int:
        phi, psi = a
        if psi:
            return idle
        if phi:
            return pending
        return m

    def lasso(m: int, a: Atoms) -> bool:
        return m == idle or a[1]

    return Monitor("Response", (path.phi, path.psi), ("idle", "pending"), idle, step, lasso)


def _next_safety(path: NextSafety) -> Monitor:
    clear, armed, violated = 0, 1, 2

    def step(m: int, a: Atoms) -> int:
        phi, psi = a
        if m == violated or (m == armed and psi):
            return violated
        return armed if phi else clear

    def lasso(m: int, a: Atoms) -> bool:
        # s^ω repeats s after s
        return m != violated and not (a[0] and a[1])

    return Monitor("NextSafety", (path.phi, path.psi), ("clear", "armed", "violated"), clear, step, lasso)


def _until(path: Until) -> Monitor:
    waiting, satisfied, violated = 0, 1, 2

    def step(m: int, a: Atoms) -> int:
        if m != waiting:
            return m
        phi, psi = a
        if psi:
            return satisfied
        return waiting if phi else violated

    def lasso(m: int, a: Atoms) -> bool:
        return m == satisfied or (m == waiting and a[1])

    return Monitor("Until", (path.phi, path.psi), ("waiting", "satisfied", "violated"), waiting, step, lasso)


def _globally_any(path: GloballyAny) -> Monitor:
    """
    On a terminating chain G(E1 ∨ ... ∨ En) holds on a path iff its absorbing
    state satisfies some lasso(Ei), where lasso(F φ) = φ(s) and
    lasso(F(φ U ψ)) = ψ(s). The monitor therefore needs one state.
    """
    atoms = tuple(e.phi if e.psi is None else e.psi for e in path.eventualities)

    def step(m: int, a: Atoms) -> int:
        return m

    def lasso(m: int, a: Atoms) -> bool:
        return any(a)

    return Monitor("GloballyAny", atoms, ("watching",), 0, step, lasso)


_COMPILERS = {
    Eventually: _eventually,
    Globally: _globally,
    Response: _response,
    NextSafety: _next_safety,
    Until: _until,
    GloballyAny: _globally_any,
}


def compile_monitor(path: PathFormula) -> Monitor:
    return _COMPILERS[type(path)](path)
