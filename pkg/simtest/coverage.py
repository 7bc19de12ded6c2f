"""
Requirement coverage: how often each monitor's precondition triggered and how
the triggered assertions resolved.
"""

import csv
import io
from typing import Dict, Iterable, List, Optional

from pydantic import BaseModel

from .schemas import MONITOR_IDS, AssertionVerdict, MonitorCounts

# Monitor → requirement it watches
REQUIREMENT_OF: Dict[str, str] = {
    "M1": "1",
    "Mgrip": "grip",
    "M2": "2",
    "M3": "3",
    "M4": "4",
    "M5": "5",
    "M6": "6",
    "M7": "7",
    "M8": "8",
}


def pass_rate(passed: int, failed: int) -> Optional[float]:
    resolved = passed + failed
    return passed / resolved if resolved else None


class CoverageEntry(BaseModel):
    requirement: str
    monitor: str
    covered: int = 0
    passed: int = 0
    failed: int = 0
    unresolved: int = 0
    pass_rate: Optional[float] = None


class CoverageTable(BaseModel):
    rows: List[CoverageEntry]

    def row(self, requirement: str) -> CoverageEntry:
        for entry in self.rows:
            if entry.requirement == requirement:
                return entry
        raise KeyError(f"no coverage row for requirement '{requirement}'")

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["Req", "Monitor", "Covered", "Passed", "Failed", "Pass rate", "Unresolved"])
        for entry in self.rows:
            rate = "" if entry.pass_rate is None else f"{entry.pass_rate:.4f}"
            writer.writerow([entry.requirement, entry.monitor, entry.covered, entry.passed,
                             entry.failed, rate, entry.unresolved])
        return buffer.getvalue()


def monitor_counts(verdicts: Iterable[AssertionVerdict]) -> Dict[str, MonitorCounts]:
    counts = {monitor: MonitorCounts() for monitor in MONITOR_IDS}
    for verdict in verdicts:
        if not verdict.triggered:
            continue
        c = counts.setdefault(verdict.monitor, MonitorCounts())
        c.covered += 1
        if verdict.result == "pass":
            c.passed += 1
        elif verdict.result == "fail":
            c.failed += 1
        else:
            c.unresolved += 1
    for c in counts.values():
        c.pass_rate = pass_rate(c.passed, c.failed)
    return counts


def coverage_report(verdicts: Iterable[AssertionVerdict]) -> CoverageTable:
    """Covered/passed/failed rows per requirement; pass rates leave unresolved verdicts out"""
    counts = monitor_counts(verdicts)
    return CoverageTable(rows=[
        CoverageEntry(requirement=REQUIREMENT_OF.get(monitor, monitor), monitor=monitor, **c.model_dump())
        for monitor, c in counts.items()
    ])
