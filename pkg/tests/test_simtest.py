import json

import pytest
from scipy.stats import binomtest

from assure.interval import interval
from errors import InvalidParams, InvalidWeights, SchemaError
from simtest import (
    AbstractTest, CampaignConfig, ConcreteTest, HumanAction, ScenarioParams, concretize, generate_abstract_tests,
    load_campaign_config, read_trace_csv, replay, run_campaign, run_test, trace_to_csv, write_trace_csv,
)
from simtest.coverage import coverage_report
from simtest.schemas import MONITOR_IDS
from tests.conftest import CAMPAIGN_DEFAULT, REFINED_SUCCESS
from utils.rng import derive_seed, derive_seeds

PREFIX = [
    HumanAction(kind="ActivateRobot"),
    HumanAction(kind="WaitForHandoverAnnounce"),
    HumanAction(kind="SignalReady"),
]


def gpl(gaze="ok", pressure="pull", location="on-object") -> HumanAction:
    return HumanAction(kind="ApplyGPL", gaze=gaze, pressure=pressure, location=location)


def concrete(actions, **faults) -> ConcreteTest:
    values = dict(
        pull_force_N=10.0,
        head_angle_deg=5.0,
        track_loss=False,
        approach_min_distance_mm=150.0,
        reset_overspeed=False,
        grip_fails=False,
        motion_error=False,
        grasp_intrusion=False,
        rng_seed=1,
    )
    values.update(faults)
    return ConcreteTest(abstract=AbstractTest(strategy="typical", actions=actions), **values)


def by_monitor(verdicts):
    return {v.monitor: v for v in verdicts}


@pytest.fixture(scope="module")
def params():
    return ScenarioParams()


class TestSeeds:
    def test_derived_seeds_are_stable_and_distinct(self):
        seeds = derive_seeds(7, 100)
        assert seeds == derive_seeds(7, 100)
        assert len(set(seeds)) == 100
        assert seeds[3] == derive_seed(7, 3)
        assert derive_seed(8, 3) != seeds[3]


class TestGenerator:
    def test_typical(self):
        tests = generate_abstract_tests("typical", 5, seed=1)
        assert len(tests) == 5
        assert all(t.find("ApplyGPL").gpl_ok for t in tests)
        assert [a.kind for a in tests[0].actions][:3] == ["ActivateRobot", "WaitForHandoverAnnounce", "SignalReady"]

    def test_not_ready_always_corrupts_a_cue(self):
        assert not any(t.find("ApplyGPL").gpl_ok for t in generate_abstract_tests("not_ready", 200, seed=2))

    def test_disengage(self):
        for test in generate_abstract_tests("disengage", 50, seed=3):
            assert test.find("ApplyGPL") is None
            assert 0 <= test.find("Disengage").at_step < 20

    def test_same_seed_same_tests(self):
        assert generate_abstract_tests("mixed", 50, 4, {"typical": 0.5, "not_ready": 0.5}) == \
            generate_abstract_tests("mixed", 50, 4, {"typical": 0.5, "not_ready": 0.5})

    def test_mixed_proportions(self):
        tests = generate_abstract_tests("mixed", 1000, 11, {"typical": 0.9, "not_ready": 0.1})
        not_ready = sum(1 for t in tests if t.strategy == "not_ready")
        assert 60 <= not_ready <= 140
        assert not any(t.strategy == "disengage" for t in tests)

    @pytest.mark.parametrize("weights", [
        None,
        {"typical": 0.5, "not_ready": 0.4},
        {"typical": 1.2, "not_ready": -0.2},
        {"typical": 0.5, "lazy": 0.5},
    ])
    def test_bad_weights(self, weights):
        with pytest.raises(InvalidWeights):
            generate_abstract_tests("mixed", 10, 0, weights)

    def test_bad_arguments(self):
        with pytest.raises(InvalidParams):
            generate_abstract_tests("typical", 0, 0)
        with pytest.raises(InvalidParams):
            generate_abstract_tests("reckless", 10, 0)

    def test_abstract_test_must_start_with_activation(self):
        with pytest.raises(ValueError):
            AbstractTest(strategy="typical", actions=[HumanAction(kind="SignalReady")])


class TestConcretize:
    def test_deterministic(self, params):
        abstract = generate_abstract_tests("typical", 1, 0)[0]
        assert concretize(abstract, params, 99) == concretize(abstract, params, 99)
        assert concretize(abstract, params, 99) != concretize(abstract, params, 100)

    def test_draws_respect_parameters(self, params):
        abstract = generate_abstract_tests("typical", 1, 0)[0]
        for seed in range(200):
            test = concretize(abstract, params, seed)
            assert params.pull_force_lo_N <= test.pull_force_N <= params.pull_force_hi_N
            assert 0.0 <= test.head_angle_deg <= params.head_angle_max_deg
            assert not test.grasp_intrusion

    def test_certain_faults(self, params):
        abstract = generate_abstract_tests("typical", 1, 0)[0]
        sure = params.model_copy(update={"grip_failure_prob": 1.0, "reset_overspeed_prob": 1.0})
        test = concretize(abstract, sure, 5)
        assert test.grip_fails and test.reset_overspeed

    def test_fault_draws_match_configured_rates(self, params):
        configured = params.model_copy(update={"grasp_intrusion_prob": 0.05})
        abstract = generate_abstract_tests("typical", 1, 0)[0]
        tests = [concretize(abstract, configured, seed) for seed in derive_seeds(2024, 2000)]
        span = configured.pull_force_hi_N - configured.pull_force_lo_N
        expected = {
            "track_loss": (configured.track_loss_prob, lambda t: t.track_loss),
            "grip_fails": (configured.grip_failure_prob, lambda t: t.grip_fails),
            "motion_error": (configured.motion_error_prob, lambda t: t.motion_error),
            "reset_overspeed": (configured.reset_overspeed_prob, lambda t: t.reset_overspeed),
            "grasp_intrusion": (configured.grasp_intrusion_prob, lambda t: t.grasp_intrusion),
            "weak_pull": ((configured.pressure_threshold_N - configured.pull_force_lo_N) / span,
                          lambda t: t.pull_force_N < configured.pressure_threshold_N),
        }
        for name, (rate, drawn) in expected.items():
            hits = sum(1 for test in tests if drawn(test))
            ci = binomtest(hits, n=len(tests), p=rate).proportion_ci(confidence_level=0.99, method="exact")
            assert ci.low <= rate <= ci.high, (name, hits)


class TestParams:
    def test_calibrated_constants_map_onto_parameters(self, params):
        mapped = params.with_constants({
            "pPressureFN": 0.071428571, "pGazeFN": 0.0, "pLocationFN": 0.030612245,
            "pGripperFailure": 0.02, "pMotionFailure": 0.002, "pClose": 0.5,
        })
        assert mapped.pull_force_lo_N == pytest.approx(1.0, abs=1e-6)
        assert mapped.head_angle_max_deg == pytest.approx(15.0)
        assert mapped.track_loss_prob == pytest.approx(0.030612245)

    def test_unreachable_pressure_rate(self, params):
        with pytest.raises(InvalidParams):
            params.with_constants({"pPressureFN": 0.5})

    def test_force_bounds(self):
        with pytest.raises(ValueError):
            ScenarioParams(pull_force_lo_N=5.0, pull_force_hi_N=5.0)

    def test_default_config_file(self):
        config = load_campaign_config(CAMPAIGN_DEFAULT)
        assert config.strategy == "typical"
        assert config.n == 500 and config.seed == 7

    def test_bad_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"strategy": "typical", "n": 0}))
        with pytest.raises(InvalidParams):
            load_campaign_config(path)


class TestSimulator:
    def test_successful_handover(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl()]), params)
        assert trace.outcome == "success"
        assert trace.first("grasp").step == 16
        assert trace.first("decision_release") is not None
        v = by_monitor(verdicts)
        assert [v[m].result for m in ("M1", "Mgrip", "M3", "M4", "M5", "M7")] == ["pass"] * 6
        assert not v["M2"].triggered and v["M2"].result is None
        assert not v["M6"].triggered
        assert not v["M8"].triggered
        assert v["M4"].trigger_step == trace.first("activated").step

    def test_weak_pull_is_not_detected(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl()], pull_force_N=1.5), params)
        assert trace.outcome == "not_released"
        v = by_monitor(verdicts)
        assert v["M1"].result == "fail"
        assert "GPL not detected" in v["M1"].detail
        assert v["M2"].triggered and v["M2"].result == "pass"
        assert not v["M3"].triggered

    def test_not_ready_human(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl(gaze="away")]), params)
        assert trace.outcome == "not_released"
        assert by_monitor(verdicts)["M2"].result == "pass"

    def test_motion_error_leaves_success_unresolved(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl()], motion_error=True), params)
        assert trace.outcome == "runtime_error"
        assert trace.steps[-1].robot_state == "motionError"
        v = by_monitor(verdicts)
        assert v["M1"].result == "unresolved"
        assert v["M1"].detail == "run aborted by a runtime error"
        assert v["M4"].result == "fail"
        assert v["M5"].result == "fail"
        assert v["M7"].result == "pass"

    def test_grip_failure(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl()], grip_fails=True), params)
        assert trace.outcome == "grip_failure"
        assert trace.first("object_dropped") is not None
        v = by_monitor(verdicts)
        assert v["Mgrip"].result == "fail"
        assert v["M1"].result == "fail"
        assert v["M5"].result == "pass"

    def test_no_cue_times_out(self, params):
        trace, verdicts = run_test(concrete(PREFIX), params)
        assert trace.outcome == "timeout"
        ready = trace.first("ready").step
        assert trace.first("timeout").step == ready + 1000
        v = by_monitor(verdicts)
        assert v["M4"].result == "pass"
        assert v["M5"].result == "pass"
        assert v["M1"].result == "fail"

    def test_disengaging_human_walks_away(self, params):
        leave = HumanAction(kind="Disengage", at_step=3)
        trace, _ = run_test(concrete([*PREFIX, leave]), params)
        assert trace.outcome == "disengaged"
        assert trace.first("disengage").step == trace.first("ready").step + 4
        assert trace.steps[-1].human_robot_distance_mm > trace.first("ready").human_robot_distance_mm

    def test_overspeed_reset(self, params):
        _, verdicts = run_test(concrete([*PREFIX, gpl()], reset_overspeed=True), params)
        assert by_monitor(verdicts)["M7"].result == "fail"

    def test_hand_in_gripper_path(self, params):
        trace, verdicts = run_test(concrete([*PREFIX, gpl()], grasp_intrusion=True), params)
        v = by_monitor(verdicts)
        assert v["M6"].triggered and v["M6"].result == "fail"
        assert v["M6"].trigger_step == trace.first("grasp").step
        assert v["M8"].triggered and v["M8"].result == "pass"

    def test_time_advances(self, params):
        trace, _ = run_test(concrete([*PREFIX, gpl()]), params)
        assert [row.step for row in trace.steps] == list(range(len(trace.steps)))
        assert trace.steps[1].time_s == pytest.approx(0.1)


class TestCampaign:
    @pytest.fixture(scope="class")
    def typical(self):
        return run_campaign(load_campaign_config(CAMPAIGN_DEFAULT))

    def test_success_rate_matches_calibrated_model(self, typical):
        report = typical.report
        assert report.n_tests == 500
        lo, hi = interval(report.successes, report.n_tests, confidence=0.95)
        assert lo <= REFINED_SUCCESS <= hi
        assert sum(report.outcomes.values()) == 500

    def test_coverage(self, typical):
        monitors = typical.report.monitors
        assert 30 <= monitors["M2"].covered <= 70
        assert monitors["M8"].covered == 0
        assert 0.80 <= monitors["M7"].pass_rate <= 0.93
        assert monitors["M7"].covered == 500
        assert set(monitors) == set(MONITOR_IDS)

    def test_failure_mode_accounting(self, typical):
        modes = typical.report.failure_modes
        assert modes["runtime_error"].opp == 500
        assert modes["grip"].opp == 500 - modes["runtime_error"].occ
        assert modes["gaze_fn"].occ == 0
        assert modes["gaze_fp"].opp == 0 and modes["gaze_fp"].rate is None

    def test_same_seed_same_report(self, typical):
        config = load_campaign_config(CAMPAIGN_DEFAULT)
        again = run_campaign(config, workers=1)
        assert again.report == typical.report
        assert again.report.model_dump_json() == typical.report.model_dump_json()

    def test_seeds_follow_master_seed(self, typical):
        assert typical.report.test_seeds == derive_seeds(7, 500)

    def test_online_and_replayed_verdicts_agree(self, typical):
        params = load_campaign_config(CAMPAIGN_DEFAULT).params
        for record in typical.records[:200]:
            assert replay(record.trace, params) == record.verdicts

    def test_coverage_table(self, typical):
        table = typical.coverage
        assert table.row("1").covered == typical.report.monitors["M1"].covered
        csv_text = table.to_csv()
        assert csv_text.splitlines()[0] == "Req,Monitor,Covered,Passed,Failed,Pass rate,Unresolved"
        assert len(csv_text.splitlines()) == 1 + len(MONITOR_IDS)
        with pytest.raises(KeyError):
            table.row("9")


def test_replay_agrees_on_faulty_mixed_campaign():
    faulty = ScenarioParams(
        grasp_intrusion_prob=0.3, motion_error_prob=0.1, grip_failure_prob=0.1, track_loss_prob=0.2,
    )
    config = CampaignConfig(
        strategy="mixed", weights={"typical": 0.4, "not_ready": 0.4, "disengage": 0.2},
        n=120, seed=3, params=faulty,
    )
    result = run_campaign(config)
    outcomes = {record.outcome for record in result.records}
    assert {"success", "not_released", "runtime_error", "grip_failure", "disengaged"} <= outcomes
    for record in result.records:
        assert replay(record.trace, faulty) == record.verdicts


def test_empty_coverage_keeps_every_row():
    table = coverage_report([])
    assert [row.monitor for row in table.rows] == list(MONITOR_IDS)
    assert all(row.covered == 0 and row.pass_rate is None for row in table.rows)


class TestTraceFiles:
    def test_csv_file_reads_back(self, tmp_path, params):
        trace, _ = run_test(concrete([*PREFIX, gpl()], grasp_intrusion=True), params)
        path = write_trace_csv(trace, tmp_path / "traces" / "test_00000.csv")
        assert read_trace_csv(path) == trace

    def test_booleans_as_digits(self, params):
        trace, _ = run_test(concrete([*PREFIX, gpl()]), params)
        lines = trace_to_csv(trace).splitlines()
        assert lines[0].startswith("test,step,time_s,")
        assert lines[-1].endswith(",success")
        assert ",True," not in trace_to_csv(trace)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("test,step\n0,0\n")
        with pytest.raises(SchemaError):
            read_trace_csv(path)
