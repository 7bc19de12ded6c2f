"""
Cross-technique comparison of assurances for one requirement.
"""

import logging
from itertools import combinations
from typing import List, Optional, Sequence

from config import settings
from errors import InvalidCounts, MixedKinds, MixedRequirements

from .schemas import CAUSE_CHECKLIST, NUMERIC_KINDS, AgreementReport, Assurance, Consensus, PairDifference

logger = logging.getLogger(__name__)

TECHNIQUE_ORDER = {"formal": 0, "simulation": 1, "experiment": 2}
EPS = 1e-12


def _numeric(kind: str) -> bool:
    return kind in NUMERIC_KINDS


def consensus_statement(value: float) -> str:
    return f"at least {value:.4g}"


def compare(assurances: Sequence[Assurance], tolerance: Optional[float] = None) -> AgreementReport:
    """
    Agreement of two or more assurances about the same requirement.

    Probabilities and rates are compared pairwise against *tolerance*; verdicts
    agree only when identical. The consensus (smallest compared value, read as
    a lower bound) is computed whether or not the assurances agree. The result
    does not depend on the order of *assurances*.

    Raises:
        MixedRequirements, MixedKinds, InvalidCounts (fewer than two assurances)
    """
    tolerance = settings.default_tolerance if tolerance is None else tolerance
    if len(assurances) < 2:
        raise InvalidCounts(f"comparison needs at least two assurances, got {len(assurances)}")

    requirements = sorted({a.requirement for a in assurances})
    if len(requirements) > 1:
        raise MixedRequirements(f"assurances cover several requirements: {', '.join(requirements)}")
    numeric = {_numeric(a.kind) for a in assurances}
    if len(numeric) > 1:
        raise MixedKinds("cannot compare verdicts with probabilities or rates")

    ordered: List[Assurance] = sorted(assurances, key=lambda a: (TECHNIQUE_ORDER[a.technique], a.id))
    kind = "verdict" if not numeric.pop() else "probability"

    differences = []
    if kind == "probability":
        for first, second in combinations(ordered, 2):
            diff = abs(float(first.value) - float(second.value))
            differences.append(PairDifference(first=first.id, second=second.id, difference=diff))
        agree = all(d.difference <= tolerance + EPS for d in differences)
        low = min(float(a.value) for a in ordered)
        consensus = Consensus(value=low, statement=consensus_statement(low))
    else:
        agree = len({a.value for a in ordered}) == 1
        consensus = None

    report = AgreementReport(
        requirement=requirements[0],
        kind=kind,
        assurances=[a.id for a in ordered],
        techniques=[a.technique for a in ordered],
        values=[a.value for a in ordered],
        differences=differences,
        verdict="agree" if agree else "disagree",
        tolerance=tolerance,
        consensus=consensus,
        causes=[] if agree else list(CAUSE_CHECKLIST),
    )
    glyph = "✅" if agree else "❌"
    logger.info(f"[Compare] {glyph} Req {report.requirement}: {report.verdict} "
                f"({', '.join(f'{t}={v}' for t, v in zip(report.techniques, report.values))})")
    return report
