"""
Simulation campaigns.

Tests are generated from the master seed, each concrete test draws from its
own generator (master seed, test index), and the tests run on a thread pool.
Results are sorted by test index before aggregation, so the report does not
depend on scheduling.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from config import settings
from core_utils import sha256_text
from utils.rng import derive_seed

from .concretize import concretize
from .coverage import CoverageTable, coverage_report, monitor_counts
from .generator import generate_abstract_tests
from .schemas import (
    OUTCOMES, AbstractTest, AssertionVerdict, CampaignConfig, CampaignReport, ConcreteTest, RateCount, TestTrace,
)
from .simulator import run_test

logger = logging.getLogger(__name__)

SENSING_MODES = (
    ("gaze_fn", "gaze", "ok"),
    ("pressure_fn", "pressure", "pull"),
    ("location_fn", "location", "on-object"),
    ("gaze_fp", "gaze", "away"),
    ("pressure_fp", "pressure", "none"),
    ("location_fp", "location", "off"),
)


@dataclass
class TestRecord:
    __test__ = False

    index: int
    seed: int
    test: ConcreteTest
    trace: TestTrace
    verdicts: List[AssertionVerdict]

    @property
    def outcome(self) -> str:
        return self.trace.outcome


@dataclass
class CampaignResult:
    report: CampaignReport
    coverage: CoverageTable
    records: List[TestRecord] = field(default_factory=list)


def _detected(component: str, record: TestRecord, threshold: float) -> bool:
    row = record.trace.first("sensing_done")
    if component == "gaze":
        return row.gaze_ok
    if component == "pressure":
        return row.pressure_force_N >= threshold
    return row.location_tracked


def failure_modes(records: List[TestRecord], pressure_threshold_N: float) -> Dict[str, RateCount]:
    """
    Failure-mode counts with opportunity accounting: runtime errors over all
    tests, grip failures over tests that got past the motion planner, sensor
    errors over tests that reached the sensing window.
    """
    def rate(occ: int, opp: int) -> RateCount:
        return RateCount(occ=occ, opp=opp, rate=occ / opp if opp else None)

    runtime = sum(1 for r in records if r.outcome == "runtime_error")
    grip_opp = len(records) - runtime
    grip = sum(1 for r in records if r.outcome == "grip_failure")
    modes = {
        "grip": rate(grip, grip_opp),
        "runtime_error": rate(runtime, len(records)),
    }

    sensed = [r for r in records if r.trace.first("sensing_done") is not None]
    for mode, component, applied in SENSING_MODES:
        opportunities = [r for r in sensed if getattr(r.test.abstract.find("ApplyGPL"), component) == applied]
        if mode.endswith("_fn"):
            occ = sum(1 for r in opportunities if not _detected(component, r, pressure_threshold_N))
        else:
            occ = sum(1 for r in opportunities if _detected(component, r, pressure_threshold_N))
        modes[mode] = rate(occ, len(opportunities))
    return modes


def run_campaign(config: CampaignConfig, workers: Optional[int] = None) -> CampaignResult:
    """
    Run every test of *config* and aggregate the report and coverage table.

    Args:
        config: strategy, weights, number of tests, master seed, parameters
        workers: thread pool size (settings.max_workers by default)
    """
    workers = workers or settings.max_workers
    params = config.params
    abstract_tests: List[AbstractTest] = generate_abstract_tests(config.strategy, config.n, config.seed, config.weights)

    logger.info("=" * 60)
    logger.info(f"🚀 [Campaign] {config.n} {config.strategy} test(s), seed {config.seed}, {workers} worker(s)")
    logger.info("=" * 60)

    def run_one(index: int) -> TestRecord:
        seed = derive_seed(config.seed, index)
        test = concretize(abstract_tests[index], params, seed, index=index)
        trace, verdicts = run_test(test, params)
        return TestRecord(index=index, seed=seed, test=test, trace=trace, verdicts=verdicts)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(run_one, range(config.n)))
    records.sort(key=lambda record: record.index)

    verdicts = [verdict for record in records for verdict in record.verdicts]
    outcomes = {outcome: 0 for outcome in OUTCOMES}
    for record in records:
        outcomes[record.outcome] += 1
    successes = outcomes["success"]

    report = CampaignReport(
        strategy=config.strategy,
        n_tests=config.n,
        master_seed=config.seed,
        config_hash=sha256_text(config.model_dump_json()),
        tool_version=settings.tool_version,
        successes=successes,
        success_rate=successes / config.n,
        outcomes=outcomes,
        monitors=monitor_counts(verdicts),
        failure_modes=failure_modes(records, params.pressure_threshold_N),
        test_seeds=[record.seed for record in records],
    )

    status = "✅" if report.monitors["M1"].failed == 0 else "⚠️"
    logger.info(f"[Campaign] {status} {successes}/{config.n} successful handovers ({report.success_rate:.3f})")
    return CampaignResult(report=report, coverage=coverage_report(verdicts), records=records)
