"""
Requirement library for the handover task.

Formal encodings live in props/reqs.qry (queries named after the requirement
id); simulation monitors are named M1..M8 after the requirement they watch.
"""

import builtins
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from propcheck.formulas import PropertyQuery
from propcheck.parser import parse_property_file

SCENARIO_DIR = Path(__file__).parent
REQUIREMENTS_FILE = SCENARIO_DIR / "props" / "reqs.qry"
MODELS_DIR = SCENARIO_DIR / "models"
DATA_DIR = SCENARIO_DIR / "data"

TECHNIQUES = ("formal", "simulation", "experiment")


@dataclass(frozen=True)
class RequirementSpec:
    id: str
    statement: str
    checkable_by: Tuple[str, ...]
    property: Optional[PropertyQuery] = None
    monitor: Optional[str] = None

    @builtins.property
    def group(self) -> str:
        """Requirement number the assurances are filed under ('1a' → '1')"""
        return self.id.rstrip("ab")


_STATEMENTS: Dict[str, str] = {
    "1a": "At least 95% of handover attempts should be completed successfully.",
    "1b": "At least 60% of handover attempts should be completed successfully.",
    "2": "If the human is not ready, the robot shall not hand over the object.",
    "3": "If the human is ready, the robot shall hand over the object.",
    "4": "The robot always reaches a decision within a threshold of time.",
    "5": "The robot shall always either time out, decide to release the object, or decide not to release the object.",
    "5b": "As Req 5, counting a motion planning error as a resolved outcome.",
    "6": "The robot shall not close its hand when the human is too close.",
    "7": "The robot shall start in restricted speed.",
    "8": "If the robot is within 10 cm of the human, the robot's hand speed is less than 250 mm/s.",
}

_CHECKERS: Dict[str, Tuple[str, ...]] = {
    "1a": TECHNIQUES,
    "1b": TECHNIQUES,
    "2": TECHNIQUES,
    "3": TECHNIQUES,
    "4": TECHNIQUES,
    "5": TECHNIQUES,
    "5b": ("formal",),
    "6": TECHNIQUES,
    # Restricted speed and hand speed are not part of the formal model
    "7": ("simulation", "experiment"),
    "8": ("simulation", "experiment"),
}


@lru_cache(maxsize=1)
def requirement_queries() -> Dict[str, PropertyQuery]:
    """Named queries of the shipped requirement file"""
    queries = parse_property_file(REQUIREMENTS_FILE.read_text(encoding="utf-8"))
    return {query.name: query for query in queries if query.name}


def requirement_library() -> List[RequirementSpec]:
    """All ten requirement specs in document order"""
    queries = requirement_queries()
    specs = []
    for req_id, statement in _STATEMENTS.items():
        checkers = _CHECKERS[req_id]
        monitor = f"M{req_id.rstrip('ab')}" if "simulation" in checkers else None
        specs.append(RequirementSpec(
            id=req_id,
            statement=statement,
            checkable_by=checkers,
            property=queries.get(req_id) if "formal" in checkers else None,
            monitor=monitor,
        ))
    return specs


def requirement(req_id: str) -> RequirementSpec:
    for spec in requirement_library():
        if spec.id == req_id:
            return spec
    raise KeyError(f"no requirement '{req_id}'")
