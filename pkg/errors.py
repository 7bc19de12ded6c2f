"""
Exception hierarchy for assurekit.

Every error belongs to one of three categories, and the category decides the
command-line exit status:

    InputError          → 2  (parse, schema and parameter problems)
    NondeterminismError → 3  (model has more than one enabled alternative)
    EngineError         → 5  (internal or numerical failure)
"""

from typing import Iterable, List, Optional


class AssureKitError(Exception):
    """Base class for all assurekit errors"""

    exit_code = 5


class InputError(AssureKitError):
    exit_code = 2


class NondeterminismError(AssureKitError):
    exit_code = 3


class EngineError(AssureKitError):
    exit_code = 5


# ── Modelling language ────────────────────────────────────────────────────────

class ModelSyntaxError(InputError):
    """Parse failure with source position and the tokens the parser expected"""

    def __init__(self, message: str, line: int, column: int, expected: Optional[Iterable[str]] = None):
        self.line = line
        self.column = column
        self.expected: List[str] = sorted(expected or [])
        detail = f"line {line}, column {column}: {message}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class DuplicateName(InputError):
    pass


class UnboundIdentifier(InputError):
    pass


class UnknownConstant(InputError):
    pass


class KindMismatch(InputError):
    pass


class ProbabilityOutOfRange(InputError):
    pass


class InconsistentOverride(InputError):
    pass


class DuplicateAssignment(InputError):
    pass


class DivisionByZero(EngineError):
    pass


class InvalidBranchProbabilities(InputError):
    pass


class DomainViolation(InputError):
    pass


# ── Chain construction ────────────────────────────────────────────────────────

class NondeterministicState(NondeterminismError):
    """More than one enabled alternative in a state under policy=reject"""

    def __init__(self, state: dict, alternatives: List[str]):
        self.state = state
        self.alternatives = alternatives
        super().__init__(
            f"{len(alternatives)} enabled alternatives in state {state}: {', '.join(alternatives)}"
        )


class ConflictingAssignment(InputError):
    pass


class StateSpaceLimitExceeded(EngineError):
    pass


# ── Property checking ─────────────────────────────────────────────────────────

class PropertySyntaxError(ModelSyntaxError):
    pass


class UnsupportedPattern(InputError):
    pass


class UnboundAtomIdentifier(InputError):
    pass


class AtomResolutionError(InputError):
    pass


class NonTerminatingChain(EngineError):
    pass


class NumericalNonConvergence(EngineError):
    pass


class PathCapExceeded(EngineError):
    pass


# ── Scenario, simulation and assurance ───────────────────────────────────────

class SchemaError(InputError):
    pass


class CountInconsistency(InputError):
    pass


class InvalidWeights(InputError):
    pass


class InvalidParams(InputError):
    pass


class ZeroOpportunities(InputError):
    pass


class InvalidCounts(InputError):
    pass


class MixedKinds(InputError):
    pass


class MixedRequirements(InputError):
    pass


class CorruptLedger(InputError):
    pass


class LedgerLockTimeout(EngineError):
    pass
