"""
Abstract test generation.

The human side of a handover is a short action sequence: activate the robot,
wait for the announcement, signal readiness, then either apply the
gaze/pressure/location cue (GPL) or walk away. Strategies pick which of these
sequences to produce.
"""

import logging
from typing import Dict, List, Mapping, Optional

import numpy as np

from errors import InvalidParams, InvalidWeights
from utils.rng import make_rng

from .schemas import AbstractTest, HumanAction

logger = logging.getLogger(__name__)

BASE_STRATEGIES = ("typical", "not_ready", "disengage")
WEIGHT_TOLERANCE = 1e-9
# Disengage happens within this many steps after SignalReady
DISENGAGE_HORIZON = 20

_PREFIX = (
    HumanAction(kind="ActivateRobot"),
    HumanAction(kind="WaitForHandoverAnnounce"),
    HumanAction(kind="SignalReady"),
)


def _typical(rng: np.random.Generator) -> AbstractTest:
    gpl = HumanAction(kind="ApplyGPL", gaze="ok", pressure="pull", location="on-object")
    return AbstractTest(strategy="typical", actions=[*_PREFIX, gpl])


def _not_ready(rng: np.random.Generator) -> AbstractTest:
    corrupt = rng.random(3) < 0.5
    if not corrupt.any():
        corrupt[int(rng.integers(3))] = True
    gpl = HumanAction(
        kind="ApplyGPL",
        gaze="away" if corrupt[0] else "ok",
        pressure="none" if corrupt[1] else "pull",
        location="off" if corrupt[2] else "on-object",
    )
    return AbstractTest(strategy="not_ready", actions=[*_PREFIX, gpl])


def _disengage(rng: np.random.Generator) -> AbstractTest:
    leave = HumanAction(kind="Disengage", at_step=int(rng.integers(DISENGAGE_HORIZON)))
    return AbstractTest(strategy="disengage", actions=[*_PREFIX, leave])


_GENERATORS = {
    "typical": _typical,
    "not_ready": _not_ready,
    "disengage": _disengage,
}


def check_weights(weights: Optional[Mapping[str, float]]) -> Dict[str, float]:
    """
    Raises:
        InvalidWeights: missing weights, unknown strategies, negative weights
                        or a sum other than 1
    """
    if not weights:
        raise InvalidWeights("the mixed strategy needs weights")
    unknown = sorted(set(weights) - set(BASE_STRATEGIES))
    if unknown:
        raise InvalidWeights(f"unknown strategies in weights: {', '.join(unknown)}")
    if any(w < 0 for w in weights.values()):
        raise InvalidWeights("weights must be non-negative")
    total = sum(weights.values())
    if abs(total - 1.0) > WEIGHT_TOLERANCE:
        raise InvalidWeights(f"weights sum to {total}, not 1")
    return {name: float(weights.get(name, 0.0)) for name in BASE_STRATEGIES}


def generate_abstract_tests(
    strategy: str,
    n: int,
    seed: int,
    weights: Optional[Mapping[str, float]] = None,
) -> List[AbstractTest]:
    """
    Generate *n* abstract tests with one seeded generator.

    Args:
        strategy: typical, not_ready, disengage or mixed
        n: number of tests (≥ 1)
        seed: generator seed; identical arguments give identical tests
        weights: per-strategy probabilities, mixed only

    Raises:
        InvalidWeights, InvalidParams
    """
    if n < 1:
        raise InvalidParams(f"cannot generate {n} tests")
    rng = make_rng(seed)

    if strategy == "mixed":
        mix = check_weights(weights)
        probs = np.array([mix[name] for name in BASE_STRATEGIES])
        picks = rng.choice(len(BASE_STRATEGIES), size=n, p=probs)
        tests = [_GENERATORS[BASE_STRATEGIES[k]](rng) for k in picks]
    elif strategy in _GENERATORS:
        tests = [_GENERATORS[strategy](rng) for _ in range(n)]
    else:
        raise InvalidParams(f"unknown strategy '{strategy}'")

    logger.debug(f"[Generator] {n} abstract test(s), strategy={strategy}")
    return tests
