import json

import pytest

from chain.builder import build_chain
from errors import CountInconsistency, SchemaError
from modellang.printer import print_model
from propcheck import check, parse_property
from scenario import (
    BASELINE, CALIBRATED_CONSTANTS, REFINED, ScenarioVariant, build_variant, load_calibration, parse_calibration,
    requirement, requirement_library,
)
from scenario.requirements import requirement_queries
from tests.conftest import EXPERIMENTS, REFINED_SUCCESS

SUCCESS = "P=? [ F robotState=handoverSuccessful ]"
TIMEOUT = "P=? [ F robotState=timedOut ]"


def probability(model, text: str) -> float:
    return check(build_chain(model), parse_property(text, model=model), model=model).probability


class TestModelFamily:
    def test_one_shot_sensors(self):
        model = build_variant(ScenarioVariant(one_shot_sensors=True, overrides=CALIBRATED_CONSTANTS))
        assert probability(model, SUCCESS) == pytest.approx(0.9001457729154516, rel=1e-9)

    def test_one_shot_with_gripper_failure(self):
        variant = ScenarioVariant(one_shot_sensors=True, gripper_failure=True, overrides=CALIBRATED_CONSTANTS)
        assert probability(build_variant(variant), SUCCESS) == pytest.approx(0.8821428574571426, rel=1e-9)

    def test_refined(self):
        assert probability(build_variant(REFINED), SUCCESS) == pytest.approx(REFINED_SUCCESS, rel=1e-9)

    def test_shipped_refined_model_matches_variant(self, refined_model, refined_chain):
        query = parse_property(SUCCESS, model=refined_model)
        assert check(refined_chain, query, model=refined_model).probability == pytest.approx(REFINED_SUCCESS, rel=1e-9)

    def test_shipped_baseline_model_matches_variant(self, baseline_model):
        assert print_model(baseline_model) == print_model(build_variant(BASELINE))

    @pytest.mark.parametrize("rounds", [1, 2, 3, 4, 5, 6])
    def test_baseline_timeout_shrinks_with_rounds(self, rounds):
        model = build_variant(ScenarioVariant(sensing_rounds=rounds))
        assert probability(model, TIMEOUT) == pytest.approx((1 - 0.857375) ** rounds, rel=1e-9)

    def test_extra_overrides_win(self):
        model = build_variant(REFINED, overrides={"pGripperFailure": 0.0})
        assert probability(model, SUCCESS) > REFINED_SUCCESS

    def test_invalid_variant(self):
        with pytest.raises(ValueError):
            build_variant(ScenarioVariant(sensing_rounds=0))

    def test_names(self):
        assert BASELINE.name == "handover_baseline"
        assert REFINED.name == "handover_oneshot_gripper_motion_proximity"


class TestRequirementQueries:
    @pytest.fixture(scope="class")
    def results(self, refined_model, refined_chain):
        return {
            name: check(refined_chain, query, model=refined_model)
            for name, query in requirement_queries().items()
        }

    def test_success_rate(self, results):
        assert results["1"].probability == pytest.approx(REFINED_SUCCESS, rel=1e-9)
        assert results["1a"].verdict is False
        assert results["1b"].verdict is True

    def test_not_ready_never_decides(self, results):
        assert results["2"].probability == pytest.approx(1.0, abs=1e-9)

    def test_ready_means_success(self, results):
        assert results["3"].probability == pytest.approx(REFINED_SUCCESS, rel=1e-9)

    def test_decision_in_time(self, results):
        assert results["4"].probability == pytest.approx(1.0, abs=1e-9)

    def test_outcomes(self, results):
        assert results["5"].probability == pytest.approx(0.998, abs=1e-9)
        assert results["5b"].probability == pytest.approx(1.0, abs=1e-9)

    def test_closing_hand(self, results):
        assert results["6"].probability == pytest.approx(1 - 0.998 * 0.075, abs=1e-9)
        assert results["6"].pattern == "NextSafety"


def test_requirement_library():
    specs = requirement_library()
    assert [s.id for s in specs] == ["1a", "1b", "2", "3", "4", "5", "5b", "6", "7", "8"]
    assert requirement("1a").group == "1"
    assert requirement("1a").monitor == "M1"
    assert requirement("5b").checkable_by == ("formal",)
    assert requirement("5b").monitor is None
    assert requirement("7").property is None
    assert requirement("6").property is not None
    with pytest.raises(KeyError):
        requirement("9")


class TestCalibrationData:
    def test_shipped_dataset(self):
        dataset = load_calibration(EXPERIMENTS)
        assert dataset.tests == 100
        assert dataset.success_rate == pytest.approx(0.88)
        assert dataset.modes["pressure_fn"].rate == pytest.approx(7 / 98)
        assert dataset.modes["gaze_fp"].rate is None
        assert dataset.simulation.modes["runtime_error"].occ == 1
        assert dataset.coverage["7"].failed == 20

    def test_missing_mode(self):
        data = json.loads(EXPERIMENTS.read_text())
        del data["modes"]["grip"]
        with pytest.raises(SchemaError):
            parse_calibration(data)

    def test_occurrences_above_opportunities(self):
        data = json.loads(EXPERIMENTS.read_text())
        data["modes"]["grip"] = {"occ": 5, "opp": 3}
        with pytest.raises(CountInconsistency):
            parse_calibration(data)

    def test_unreadable_file(self, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{ not json")
        with pytest.raises(SchemaError):
            load_calibration(broken)
