import json

import pytest

from assure import (
    AssuranceLedger, calibrate, compare, counted, experiment_assurances, interval, ledger_append, ledger_query,
    new_assurance, simulation_assurance,
)
from chain.builder import build_chain
from errors import CorruptLedger, InvalidCounts, LedgerLockTimeout, MixedKinds, MixedRequirements, ZeroOpportunities
from modellang.constants import set_constants
from propcheck import check, parse_property
from scenario import load_calibration, parse_calibration
from simtest.schemas import MonitorCounts
from tests.conftest import EXPERIMENTS, REFINED_SUCCESS


def prob(requirement, technique, value):
    return new_assurance(requirement, technique, "probability" if technique == "formal" else "rate", value)


class TestInterval:
    def test_success_rate_of_experiments(self):
        lo, hi = interval(88, 100)
        assert lo == pytest.approx(0.795, abs=0.01)
        assert hi == pytest.approx(0.936, abs=0.01)
        assert lo < 0.88 < hi

    def test_adds_two_successes_and_two_failures(self):
        lo, hi = interval(88, 100)
        assert (lo + hi) / 2 == pytest.approx(90 / 104)

    def test_clipped_at_zero(self):
        lo, hi = interval(0, 10)
        assert lo == 0.0
        assert 0.0 < hi < 1.0

    def test_clipped_at_one(self):
        assert interval(10, 10)[1] == 1.0

    def test_simulation_rate_inside(self):
        lo, hi = interval(439, 500)
        assert lo < 0.878 < hi

    def test_other_confidence_levels_are_nested(self):
        lo90, hi90 = interval(88, 100, confidence=0.90)
        lo99, hi99 = interval(88, 100, confidence=0.99)
        assert lo99 < lo90 and hi90 < hi99

    @pytest.mark.parametrize("n", [1, 7, 100, 500])
    @pytest.mark.parametrize("confidence", [0.95, 0.99])
    def test_monotone_in_successes_and_contains_estimate(self, n, confidence):
        bounds = [interval(k, n, confidence) for k in range(n + 1)]
        for (lo, hi), (next_lo, next_hi) in zip(bounds, bounds[1:]):
            assert next_lo >= lo and next_hi >= hi
        for k in range(1, n):
            lo, hi = bounds[k]
            assert lo <= k / n <= hi

    @pytest.mark.parametrize("successes, n, confidence", [(5, 0, 0.95), (11, 10, 0.95), (-1, 10, 0.95), (5, 10, 1.0)])
    def test_invalid(self, successes, n, confidence):
        with pytest.raises(InvalidCounts):
            interval(successes, n, confidence)


class TestCalibrate:
    def test_shipped_dataset(self):
        rates, constants = calibrate(load_calibration(EXPERIMENTS))
        assert constants["pPressureFN"] == 0.071428571
        assert constants["pPressureTP"] == 0.928571429
        assert constants["pLocationFN"] == 0.030612245
        assert constants["pGripperFailure"] == 0.02
        assert constants["pGazeFN"] == 0.0

    def test_motion_failure_falls_back_to_simulation(self):
        rates, constants = calibrate(load_calibration(EXPERIMENTS))
        assert constants["pMotionFailure"] == 0.002
        entry = rates.modes["runtime_error"]
        assert entry.source == "simulation"
        assert (entry.occ, entry.opp) == (0, 100)
        assert (entry.fallback_occ, entry.fallback_opp) == (1, 500)
        assert entry.rate == 0.0
        assert entry.fallback_rate == entry.emitted == 0.002

    def test_rates_are_exact_count_ratios(self):
        rates, _ = calibrate(load_calibration(EXPERIMENTS))
        for entry in rates.modes.values():
            if entry.opp:
                assert entry.rate == entry.occ / entry.opp
            if entry.fallback_opp:
                assert entry.fallback_rate == entry.fallback_occ / entry.fallback_opp

    def test_unobservable_false_positives(self):
        rates, constants = calibrate(load_calibration(EXPERIMENTS))
        assert sorted(rates.flagged()) == ["gaze_fp", "location_fp", "pressure_fp"]
        assert constants["pGazeFP"] == 0.0 and constants["pGazeTN"] == 1.0

    def test_all_zero_counts(self):
        modes = {m: {"occ": 0, "opp": 10} for m in ("grip", "gaze_fn", "pressure_fn", "location_fn", "runtime_error")}
        rates, constants = calibrate(parse_calibration({"tests": 10, "successes": 10, "modes": modes}))
        assert all(constants[name] == 0.0 for name in ("pGripperFailure", "pMotionFailure", "pPressureFN"))
        assert constants["pGripperOk"] == 1.0
        assert rates.modes["grip"].source == "experiments"

    def test_grip_rate(self):
        data = json.loads(EXPERIMENTS.read_text())
        data["modes"]["grip"] = {"occ": 3, "opp": 100}
        _, constants = calibrate(parse_calibration(data))
        assert constants["pGripperFailure"] == 0.03

    def test_required_mode_without_opportunities(self):
        data = json.loads(EXPERIMENTS.read_text())
        data["modes"]["grip"] = {"occ": 0, "opp": 0}
        data.pop("simulation")
        with pytest.raises(ZeroOpportunities):
            calibrate(parse_calibration(data))

    def test_calibrated_constants_reproduce_refined_success(self, refined_model):
        _, constants = calibrate(load_calibration(EXPERIMENTS))
        model = set_constants(refined_model, constants)
        result = check(build_chain(model), parse_property("P=? [ F robotState=handoverSuccessful ]"), model=model)
        assert result.probability == pytest.approx(REFINED_SUCCESS, abs=1e-9)


class TestCompare:
    def test_refined_success_rate_agrees(self):
        report = compare([prob("1", "experiment", 0.88), prob("1", "formal", 0.8804), prob("1", "simulation", 0.878)],
                         tolerance=0.01)
        assert report.verdict == "agree"
        assert report.techniques == ["formal", "simulation", "experiment"]
        assert report.consensus.value == 0.878
        assert report.consensus.statement == "at least 0.878"
        assert report.causes == []
        assert len(report.differences) == 3

    def test_baseline_disagrees_with_simulation(self):
        report = compare([prob("1", "formal", 1.0), prob("1", "simulation", 0.80)], tolerance=0.03)
        assert report.verdict == "disagree"
        assert report.differences[0].difference == pytest.approx(0.2)
        assert report.causes == ["system-model", "requirement-model", "tool"]

    def test_consensus_on_disagreement(self):
        report = compare([prob("1", "formal", 0.92), prob("1", "simulation", 0.98), prob("1", "experiment", 0.93)],
                         tolerance=0.01)
        assert report.verdict == "disagree"
        assert report.consensus.statement == "at least 0.92"

    def test_order_independent(self):
        items = [prob("3", "formal", 0.88), prob("3", "simulation", 1.0), prob("3", "experiment", 0.9)]
        assert compare(items, 0.03) == compare(list(reversed(items)), 0.03)

    def test_default_tolerance(self):
        assert compare([prob("1", "formal", 0.90), prob("1", "simulation", 0.88)]).tolerance == 0.03

    def test_exactly_at_tolerance_agrees(self):
        assert compare([prob("1", "formal", 0.5), prob("1", "simulation", 0.75)], tolerance=0.25).verdict == "agree"

    def test_verdicts(self):
        yes = new_assurance("1a", "formal", "verdict", True)
        no = new_assurance("1a", "simulation", "verdict", False)
        report = compare([yes, no])
        assert report.kind == "verdict" and report.verdict == "disagree"
        assert report.consensus is None

    def test_mixed_kinds(self):
        with pytest.raises(MixedKinds):
            compare([new_assurance("1", "formal", "verdict", True), prob("1", "simulation", 0.9)])

    def test_mixed_requirements(self):
        with pytest.raises(MixedRequirements):
            compare([prob("1", "formal", 0.9), prob("2", "simulation", 0.9)])

    def test_needs_two(self):
        with pytest.raises(InvalidCounts):
            compare([prob("1", "formal", 0.9)])


class TestRecords:
    def test_ids_are_content_derived(self):
        first = counted("1", "experiment", 88, 100, source_hash="abc")
        again = counted("1", "experiment", 88, 100, source_hash="abc")
        other = counted("1", "experiment", 87, 100, source_hash="abc")
        assert first.id == again.id != other.id
        assert first.id.startswith("E1-")

    def test_counted_rate_carries_interval(self):
        assurance = counted("1", "experiment", 88, 100)
        assert assurance.value == 0.88
        assert assurance.interval.lo < 0.88 < assurance.interval.hi
        assert assurance.provenance.n == 100

    def test_value_must_match_kind(self):
        with pytest.raises(ValueError):
            new_assurance("1", "formal", "verdict", 0.5)
        with pytest.raises(ValueError):
            new_assurance("1", "formal", "probability", 1.5)

    def test_simulation_assurance_skips_unresolved(self):
        counts = MonitorCounts(covered=10, passed=6, failed=2, unresolved=2)
        assurance = simulation_assurance("1", counts, "cfg", seed=7)
        assert assurance.value == 0.75
        assert assurance.provenance.seed == 7
        assert simulation_assurance("8", MonitorCounts(), "cfg", seed=7) is None

    def test_experiment_assurances(self):
        dataset = load_calibration(EXPERIMENTS)
        found = {a.requirement: a for a in experiment_assurances(dataset, ["1", "2", "3", "7"])}
        assert found["1"].value == 0.88
        assert found["3"].value == pytest.approx(88 / 98)
        assert found["7"].value == pytest.approx(78 / 98)
        assert "2" not in found


class TestLedger:
    def test_append_then_query(self, tmp_path):
        path = tmp_path / "ledger.jsonl"
        ledger_append(path, [counted("1", "experiment", 88, 100)])
        found = ledger_query(path, requirement="1")
        assert len(found) == 1
        assert found[0].created_at is not None

    def test_sequence_kept_in_order(self, tmp_path):
        ledger = AssuranceLedger(tmp_path / "ledger.jsonl")
        values = [1.0, 0.878, 0.9001, 0.8821, 0.8804]
        techniques = ["formal", "simulation", "formal", "formal", "formal"]
        for technique, value in zip(techniques, values):
            ledger.append([prob("1", technique, value)])
        assert [a.value for a in ledger.query(requirement="1")] == values
        assert len(ledger.query(requirement="1", technique="simulation")) == 1
        assert ledger.query(requirement="42") == []

    def test_created_at_is_not_identity(self, tmp_path):
        fresh = counted("1", "experiment", 88, 100)
        stored, = ledger_append(tmp_path / "ledger.jsonl", [fresh])
        assert stored.created_at is not None
        assert stored.id == fresh.id == counted("1", "experiment", 88, 100).id
        assert stored.model_dump(exclude={"created_at"}) == fresh.model_dump(exclude={"created_at"})

    def test_missing_file_is_empty(self, tmp_path):
        assert AssuranceLedger(tmp_path / "none.jsonl").read() == []

    def test_corrupt_line(self, tmp_path):
        path = tmp_path / "ledger.jsonl"
        ledger_append(path, [prob("1", "formal", 0.9)])
        with path.open("a") as handle:
            handle.write("{ not an assurance\n")
        with pytest.raises(CorruptLedger) as info:
            ledger_query(path)
        assert f"{path}:2" in str(info.value)

    def test_held_lock(self, tmp_path):
        path = tmp_path / "ledger.jsonl"
        (tmp_path / "ledger.jsonl.lock").write_text("12345")
        with pytest.raises(LedgerLockTimeout):
            AssuranceLedger(path, lock_attempts=2).append([prob("1", "formal", 0.9)])
        assert not path.exists()

    def test_lock_released_after_append(self, tmp_path):
        path = tmp_path / "ledger.jsonl"
        ledger_append(path, [prob("1", "formal", 0.9)])
        assert not (tmp_path / "ledger.jsonl.lock").exists()
