"""
Assurance builders for the three techniques.
"""

import json
from typing import List, Optional, Sequence, Union

from config import settings
from core_utils import sha256_text
from propcheck.checker import ProbResult
from scenario.calibration import CalibrationDataset
from simtest.schemas import MonitorCounts

from .interval import interval
from .schemas import Assurance, Interval, Provenance

TYPICAL_USE = "typical use case"


def new_assurance(
    requirement: str,
    technique: str,
    kind: str,
    value: Union[bool, float],
    *,
    interval_: Optional[Interval] = None,
    constraints: str = TYPICAL_USE,
    source_hash: Optional[str] = None,
    seed: Optional[int] = None,
    n: Optional[int] = None,
) -> Assurance:
    """Assurance with a content-derived id (same inputs, same id)"""
    provenance = Provenance(source_hash=source_hash, seed=seed, n=n, tool_version=settings.tool_version)
    digest = sha256_text(json.dumps(
        [requirement, technique, kind, value, constraints, provenance.model_dump()],
        sort_keys=True,
    ))
    return Assurance(
        id=f"{technique[0].upper()}{requirement}-{digest[:10]}",
        requirement=requirement,
        technique=technique,
        kind=kind,
        value=value,
        interval=interval_,
        constraints=constraints,
        provenance=provenance,
    )


def counted(
    requirement: str,
    technique: str,
    passed: int,
    trials: int,
    *,
    source_hash: Optional[str] = None,
    seed: Optional[int] = None,
) -> Assurance:
    """Rate assurance passed/trials with its 95% interval"""
    lo, hi = interval(passed, trials)
    rate = passed / trials
    return new_assurance(
        requirement, technique, "rate", rate,
        interval_=Interval(lo=min(lo, rate), hi=max(hi, rate), confidence=0.95),
        source_hash=source_hash, seed=seed, n=trials,
    )


def formal_assurance(requirement: str, result: ProbResult, model_hash: str) -> Assurance:
    return new_assurance(
        requirement, "formal", "probability", min(result.probability, 1.0),
        source_hash=model_hash,
    )


def simulation_assurance(
    requirement: str,
    counts: MonitorCounts,
    config_hash: str,
    seed: int,
) -> Optional[Assurance]:
    """Pass rate of the requirement's monitor; None when nothing was resolved"""
    resolved = counts.passed + counts.failed
    if resolved == 0:
        return None
    return counted(requirement, "simulation", counts.passed, resolved, source_hash=config_hash, seed=seed)


def experiment_assurances(
    dataset: CalibrationDataset,
    requirements: Sequence[str],
    dataset_hash: Optional[str] = None,
) -> List[Assurance]:
    """
    Success rate for Req 1, coverage pass rates for the others; requirements
    the experiments never covered get no assurance.
    """
    out = []
    for req in requirements:
        if req == "1":
            out.append(counted(req, "experiment", dataset.successes, dataset.tests, source_hash=dataset_hash))
            continue
        row = dataset.coverage.get(req)
        if row is not None and row.covered > 0:
            out.append(counted(req, "experiment", row.passed, row.covered, source_hash=dataset_hash))
    return out
