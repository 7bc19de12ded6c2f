"""
Pydantic records of the handover testbench: scenario parameters, abstract and
concrete tests, traces, monitor verdicts, campaign configs and reports.
"""

import json
from pathlib import Path
from typing import Dict, List, Literal, Mapping, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from errors import InvalidParams

Outcome = Literal["success", "not_released", "timeout", "grip_failure", "runtime_error", "disengaged"]
OUTCOMES = ("success", "not_released", "timeout", "grip_failure", "runtime_error", "disengaged")

ActionKind = Literal["ActivateRobot", "WaitForHandoverAnnounce", "SignalReady", "ApplyGPL", "Disengage"]
Strategy = Literal["typical", "not_ready", "disengage", "mixed"]

MONITOR_IDS = ("M1", "Mgrip", "M2", "M3", "M4", "M5", "M6", "M7", "M8")


class ScenarioParams(BaseModel):
    """Kinematic constants and fault rates of the desk-scale handover"""

    dt_s: float = Field(0.1, gt=0, description="Simulation step")
    pull_force_lo_N: float = Field(1.0, ge=0, description="Lower bound of the human's pull force")
    pull_force_hi_N: float = Field(15.0, gt=0, description="Upper bound of the human's pull force")
    pressure_threshold_N: float = Field(2.0, ge=0, description="Force the pressure sensor needs to detect a pull")
    head_angle_max_deg: float = Field(15.0, ge=0, description="Head angles are drawn from [0, max]")
    gaze_cone_deg: float = Field(15.0, ge=0, description="Gaze is detected within this angle")
    track_loss_prob: float = Field(3 / 98, ge=0, le=1, description="Location tracker loses the hand")
    grip_failure_prob: float = Field(0.02, ge=0, le=1, description="Object slips out of the gripper while carrying")
    motion_error_prob: float = Field(0.002, ge=0, le=1, description="Motion planner fails to plan the carry")
    reset_overspeed_prob: float = Field(0.126, ge=0, le=1, description="Reset motion runs above restricted speed")
    grasp_intrusion_prob: float = Field(0.0, ge=0, le=1, description="Human hand near the gripper while it closes")
    approach_min_distance_mm: float = Field(150.0, gt=0, description="Closest approach of the human hand")
    close_threshold_mm: float = Field(100.0, gt=0)
    near_threshold_mm: float = Field(100.0, gt=0)
    speed_limit_mm_s: float = Field(250.0, gt=0)
    reset_speed_mm_s: float = Field(150.0, ge=0)
    overspeed_mm_s: float = Field(300.0, ge=0)
    reset_window_s: float = Field(0.5, gt=0)
    decision_window_s: float = Field(2.0, gt=0)
    timeout_s: float = Field(100.0, gt=0)

    @model_validator(mode="after")
    def _force_bounds(self) -> "ScenarioParams":
        if not self.pull_force_lo_N < self.pull_force_hi_N:
            raise ValueError(f"pull force bounds must satisfy lo < hi, got [{self.pull_force_lo_N}, {self.pull_force_hi_N}]")
        return self

    def with_constants(self, constants: Mapping[str, float]) -> "ScenarioParams":
        """
        Parameters matching calibrated model constants.

        pGripperFailure, pMotionFailure and pLocationFN set the Bernoulli
        rates directly. pPressureFN moves the lower pull-force bound so that
        P(force < threshold) equals it; pGazeFN widens the head-angle range so
        that P(angle > cone) equals it. Other constants are ignored.

        Raises:
            InvalidParams: a rate that no parameter setting can reproduce
        """
        data = self.model_dump()
        direct = {
            "pGripperFailure": "grip_failure_prob",
            "pMotionFailure": "motion_error_prob",
            "pLocationFN": "track_loss_prob",
        }
        for name, field in direct.items():
            if name in constants:
                data[field] = float(constants[name])

        if "pPressureFN" in constants:
            fn = float(constants["pPressureFN"])
            if not 0.0 <= fn < 1.0:
                raise InvalidParams(f"pPressureFN={fn} cannot be reproduced by a pull-force range")
            lo = (self.pressure_threshold_N - fn * self.pull_force_hi_N) / (1.0 - fn)
            if lo < 0:
                raise InvalidParams(f"pPressureFN={fn} needs a negative lower pull force ({lo:.3f} N)")
            data["pull_force_lo_N"] = lo

        if "pGazeFN" in constants:
            fn = float(constants["pGazeFN"])
            if not 0.0 <= fn < 1.0:
                raise InvalidParams(f"pGazeFN={fn} cannot be reproduced by a head-angle range")
            data["head_angle_max_deg"] = self.gaze_cone_deg / (1.0 - fn)

        return parse_params(data)


def parse_params(data: dict) -> ScenarioParams:
    try:
        return ScenarioParams.model_validate(data)
    except ValidationError as exc:
        raise InvalidParams(f"scenario parameters are invalid: {exc}") from exc


class HumanAction(BaseModel):
    kind: ActionKind
    gaze: Optional[Literal["ok", "away"]] = None
    pressure: Optional[Literal["pull", "none"]] = None
    location: Optional[Literal["on-object", "off"]] = None
    at_step: Optional[int] = Field(None, ge=0, description="Disengage: steps after SignalReady")

    @property
    def gpl_ok(self) -> bool:
        return self.gaze == "ok" and self.pressure == "pull" and self.location == "on-object"


class AbstractTest(BaseModel):
    """High-level action sequence of the human"""

    strategy: str
    actions: List[HumanAction]

    @model_validator(mode="after")
    def _well_formed(self) -> "AbstractTest":
        if not self.actions or self.actions[0].kind != "ActivateRobot":
            raise ValueError("an abstract test starts with ActivateRobot")
        if sum(1 for action in self.actions if action.kind == "Disengage") > 1:
            raise ValueError("an abstract test has at most one Disengage")
        return self

    def find(self, kind: str) -> Optional[HumanAction]:
        for action in self.actions:
            if action.kind == kind:
                return action
        return None


class ConcreteTest(BaseModel):
    index: int = Field(0, ge=0)
    abstract: AbstractTest
    pull_force_N: float = Field(..., ge=0)
    head_angle_deg: float = Field(..., ge=0)
    track_loss: bool
    approach_min_distance_mm: float = Field(..., gt=0)
    reset_overspeed: bool
    grip_fails: bool
    motion_error: bool
    grasp_intrusion: bool = False
    rng_seed: int = Field(..., ge=0, lt=2 ** 64)


class TraceStep(BaseModel):
    step: int
    time_s: float
    human_action: str = ""
    robot_state: str
    gaze_ok: bool = False
    pressure_force_N: float = 0.0
    location_tracked: bool = False
    hand_speed_mm_s: float = 0.0
    human_robot_distance_mm: float
    gripper_closing: bool = False
    object_in_hand: bool = False
    event: str = ""


class TestTrace(BaseModel):
    __test__ = False  # not a pytest class

    index: int = 0
    steps: List[TraceStep]
    outcome: Outcome

    @model_validator(mode="after")
    def _monotone_time(self) -> "TestTrace":
        if not self.steps:
            raise ValueError("a trace has at least one step")
        for before, after in zip(self.steps, self.steps[1:]):
            if after.step != before.step + 1 or not after.time_s > before.time_s:
                raise ValueError(f"time does not advance between steps {before.step} and {after.step}")
        return self

    def first(self, event: str) -> Optional[TraceStep]:
        for row in self.steps:
            if row.event == event:
                return row
        return None


class AssertionVerdict(BaseModel):
    monitor: str
    triggered: bool
    result: Optional[Literal["pass", "fail", "unresolved"]] = Field(
        None, description="Absent when the monitor never triggered"
    )
    trigger_step: Optional[int] = None
    detail: str = ""


class MonitorCounts(BaseModel):
    covered: int = 0
    passed: int = 0
    failed: int = 0
    unresolved: int = 0
    pass_rate: Optional[float] = Field(None, description="passed / (passed + failed); unresolved excluded")


class RateCount(BaseModel):
    occ: int = Field(..., ge=0)
    opp: int = Field(..., ge=0)
    rate: Optional[float] = None


class CampaignConfig(BaseModel):
    strategy: Strategy = "typical"
    weights: Optional[Dict[str, float]] = None
    n: int = Field(500, ge=1, description="Number of tests")
    seed: int = Field(0, ge=0, description="Master seed")
    params: ScenarioParams = Field(default_factory=ScenarioParams)


def parse_campaign_config(data: dict) -> CampaignConfig:
    try:
        return CampaignConfig.model_validate(data)
    except ValidationError as exc:
        raise InvalidParams(f"campaign config is invalid: {exc}") from exc


def load_campaign_config(path: Union[str, Path]) -> CampaignConfig:
    """
    Raises:
        InvalidParams: unreadable file or schema mismatch
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParams(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidParams(f"{path}: expected a JSON object")
    return parse_campaign_config(data)


class CampaignReport(BaseModel):
    """Aggregate of one campaign; identical configs give identical reports"""

    strategy: str
    n_tests: int
    master_seed: int
    config_hash: str
    tool_version: str
    successes: int
    success_rate: float
    outcomes: Dict[str, int]
    monitors: Dict[str, MonitorCounts]
    failure_modes: Dict[str, RateCount]
    test_seeds: List[int]
