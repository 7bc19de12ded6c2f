"""
Handover model family.

Every refinement stage of the handover model is one ScenarioVariant; the
generator renders it as guarded-command text and parses it. Time advances in
ticks of 0.1 s. The waiting phase moves the timekeeper by one sensing interval
per round, so ``sensing_rounds`` rounds fit before the timeout budget is
spent; the release phase counts single ticks up to ``release_ticks``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

from modellang.ast import Model, Value
from modellang.constants import set_constants
from modellang.parser import parse_model

logger = logging.getLogger(__name__)

HUMAN_STATES = ("start", "activatedRobot", "responding", "setGPL", "offTask")

ROBOT_STATES = (
    "waiting",
    "moveHandToObjectLocation",
    "graspObject",
    "moveHandToHandoverLocation",
    "informedHumanOfHandoverStart",
    "waitForGPLUpdate",
    "GPLOk",
    "handoverSuccessful",
    "handoverUnsuccessful",
    "timedOut",
    "motionError",
    "interactionDone",
)
ROBOT_STATE_BASE = 1100

SENSORS = ("gaze", "pressure", "location")

# Initial estimates used before any calibration
DEFAULT_CONSTANTS: Dict[str, Value] = {
    "pGazeFN": 0.05,
    "pGazeFP": 0.05,
    "pPressureFN": 0.05,
    "pPressureFP": 0.05,
    "pLocationFN": 0.05,
    "pLocationFP": 0.05,
    "pGazeReady": 1.0,
    "pPressureReady": 1.0,
    "pLocationReady": 1.0,
    "pDisengages": 0.0,
    "pGripperFailure": 0.02,
    "pMotionFailure": 0.002,
    "pClose": 0.075,
}

# Rates estimated from the handover experiments
CALIBRATED_CONSTANTS: Dict[str, Value] = {
    "pGazeFN": 0.0,
    "pPressureFN": 0.071428571,
    "pLocationFN": 0.030612245,
    "pGazeFP": 0.0,
    "pPressureFP": 0.0,
    "pLocationFP": 0.0,
    "pGripperFailure": 0.02,
    "pMotionFailure": 0.002,
}


@dataclass(frozen=True)
class ScenarioVariant:
    """
    One member of the model family.

    (False, False, False, ·) is the baseline: resampling sensors, a gripper
    that never fails and a motion planner that never fails.
    """

    one_shot_sensors: bool = False
    gripper_failure: bool = False
    motion_failure: bool = False
    proximity_module: bool = False
    overrides: Mapping[str, Value] = field(default_factory=dict, compare=False, hash=False)
    sensing_rounds: int = 6
    timeout_ticks: int = 1000
    release_ticks: int = 20

    @property
    def name(self) -> str:
        flags = "".join(
            tag for tag, on in (
                ("_oneshot", self.one_shot_sensors),
                ("_gripper", self.gripper_failure),
                ("_motion", self.motion_failure),
                ("_proximity", self.proximity_module),
            ) if on
        )
        return f"handover{flags or '_baseline'}"

    @property
    def sense_interval(self) -> int:
        return math.ceil(self.timeout_ticks / self.sensing_rounds)


def _camel(sensor: str) -> str:
    return sensor[0].upper() + sensor[1:]


def _constants(variant: ScenarioVariant) -> List[str]:
    lines = ["// Human states"]
    lines += [f"const int {name} = {value};" for value, name in enumerate(HUMAN_STATES)]
    lines.append("")
    lines.append("// Robot states")
    lines += [f"const int {name} = {ROBOT_STATE_BASE + i};" for i, name in enumerate(ROBOT_STATES)]
    lines.append("")
    lines.append("// Hand contents and readings")
    lines.append("const int nothing = 0;")
    lines.append("const int leg = 1;")
    lines.append("const int null = 0;")
    for sensor in SENSORS + ("proximity",):
        lines.append(f"const int {sensor}Ok = 1;")
        lines.append(f"const int {sensor}NotOk = 2;")
    lines.append("")

    def prob(name: str) -> str:
        return repr(float(DEFAULT_CONSTANTS[name]))

    lines.append("// Sensor error rates")
    for sensor in SENSORS:
        cap = _camel(sensor)
        lines.append(f"const double p{cap}FN = {prob(f'p{cap}FN')};")
        lines.append(f"const double p{cap}TP = 1-p{cap}FN;")
        lines.append(f"const double p{cap}FP = {prob(f'p{cap}FP')};")
        lines.append(f"const double p{cap}TN = 1-p{cap}FP;")
    lines.append("")
    lines.append("// Human readiness and engagement")
    for sensor in SENSORS:
        cap = _camel(sensor)
        lines.append(f"const double p{cap}Ready = {prob(f'p{cap}Ready')};")
        lines.append(f"const double p{cap}Away = 1-p{cap}Ready;")
    lines.append(f"const double pDisengages = {prob('pDisengages')};")
    lines.append("const double pStaysOnTask = 1-pDisengages;")
    lines.append("")
    lines.append("// Robot faults")
    lines.append(f"const double pGripperFailure = {prob('pGripperFailure')};")
    lines.append("const double pGripperOk = 1-pGripperFailure;")
    lines.append(f"const double pMotionFailure = {prob('pMotionFailure')};")
    lines.append("const double pMotionOk = 1-pMotionFailure;")
    lines.append(f"const double pClose = {prob('pClose')};")
    lines.append("const double pFar = 1-pClose;")
    lines.append("")
    lines.append("// Timing (1 tick = 0.1 s)")
    lines.append(f"const int timeoutTicks = {variant.timeout_ticks};")
    lines.append(f"const int senseInterval = {variant.sense_interval};")
    lines.append(f"const int releaseTicks = {variant.release_ticks};")
    return lines


def _human() -> List[str]:
    return [
        "module human",
        "  humanState : [0..99] init start;",
        "  [activateRobot] humanState=start -> (humanState'=activatedRobot);",
        "  [tick] humanState=activatedRobot -> (humanState'=activatedRobot);",
        "  [informHumanOfHandoverStart] humanState=activatedRobot -> (humanState'=responding);",
        "  [humanIsReady] humanState=responding -> (humanState'=setGPL);",
        "  [tick] humanState=setGPL -> pDisengages:(humanState'=offTask) + pStaysOnTask:(humanState'=setGPL);",
        "  [tick] humanState=offTask -> true;",
        "endmodule",
    ]


def _truth(sensor: str) -> List[str]:
    cap = _camel(sensor)
    return [
        f"module {sensor}",
        f"  {sensor}State : [0..2] init {sensor}Ok;",
        f"  [humanIsReady] true -> p{cap}Ready:({sensor}State'={sensor}Ok) + p{cap}Away:({sensor}State'={sensor}NotOk);",
        "endmodule",
    ]


def _proximity() -> List[str]:
    return [
        "module proximity",
        "  proximityState : [0..2] init proximityOk;",
        "  [activateRobot] true -> pFar:(proximityState'=proximityOk) + pClose:(proximityState'=proximityNotOk);",
        "  [graspingObject] true -> (proximityState'=proximityOk);",
        "endmodule",
    ]


def _robot(variant: ScenarioVariant) -> List[str]:
    if variant.motion_failure:
        activate = (
            "  [activateRobot] robotState=waiting -> pMotionOk:(robotState'=moveHandToObjectLocation)"
            " + pMotionFailure:(robotState'=motionError);"
        )
    else:
        activate = "  [activateRobot] robotState=waiting -> (robotState'=moveHandToObjectLocation);"

    if variant.gripper_failure:
        release = (
            "  [releaseObject] robotState=GPLOk & objectReleaseTimer=releaseTicks ->"
            " pGripperOk:(handContents'=nothing) & (robotState'=handoverSuccessful)"
            " + pGripperFailure:(robotState'=handoverUnsuccessful);"
        )
    else:
        release = (
            "  [releaseObject] robotState=GPLOk & objectReleaseTimer=releaseTicks ->"
            " (handContents'=nothing) & (robotState'=handoverSuccessful);"
        )

    all_ok = " & ".join(f"{s}Sensed={s}Ok" for s in SENSORS)
    any_not_ok = " | ".join(f"{s}Sensed!={s}Ok" for s in SENSORS)
    # Resampling sensors take a fresh reading every round
    after_failed_round = "(sensed'=true)" if variant.one_shot_sensors else "(sensed'=false)"

    return [
        "module robot",
        "  robotState : [1100..1199] init waiting;",
        "  handContents : [0..1] init nothing;",
        "  sensed : bool init false;",
        "  GPLWasOk : bool init false;",
        activate,
        "  [movingHand] robotState=moveHandToObjectLocation -> (robotState'=graspObject) & (handContents'=leg);",
        "  [graspingObject] robotState=graspObject -> (robotState'=moveHandToHandoverLocation);",
        "  [informHumanOfHandoverStart] robotState=moveHandToHandoverLocation ->"
        " (robotState'=informedHumanOfHandoverStart);",
        "  [humanIsReady] robotState=informedHumanOfHandoverStart -> (robotState'=waitForGPLUpdate);",
        "  [sense] robotState=waitForGPLUpdate & !sensed & humanState=setGPL & waitTime<timeoutTicks ->"
        " (sensed'=true);",
        f"  [GPLOkSet] robotState=waitForGPLUpdate & sensed & humanState=setGPL & {all_ok} ->"
        " (robotState'=GPLOk) & (GPLWasOk'=true);",
        f"  [tick] robotState=waitForGPLUpdate & sensed & humanState=setGPL & waitTime<timeoutTicks & ({any_not_ok}) ->"
        f" {after_failed_round};",
        "  [tick] robotState=waitForGPLUpdate & humanState=offTask & waitTime<timeoutTicks ->"
        " (robotState'=interactionDone);",
        "  [timeout] robotState=waitForGPLUpdate & waitTime>=timeoutTicks -> (robotState'=timedOut);",
        "  [tick] robotState=GPLOk & objectReleaseTimer<releaseTicks -> true;",
        release,
        "endmodule",
    ]


def _sensor(sensor: str, one_shot: bool) -> List[str]:
    cap = _camel(sensor)
    var = f"{sensor}Sensed"
    lines = [f"module {sensor}Sensor", f"  {var} : [0..2] init null;"]
    if one_shot:
        latch = f"{sensor}SensorSet"
        lines.append(f"  {latch} : bool init false;")
        guard = f"!{latch} & "
        set_latch = f" & ({latch}'=true)"
    else:
        guard = ""
        set_latch = ""
    lines += [
        f"  [sense] {guard}{sensor}State={sensor}Ok ->"
        f" p{cap}TP:({var}'={sensor}Ok){set_latch} + p{cap}FN:({var}'={sensor}NotOk){set_latch};",
        f"  [sense] {guard}{sensor}State={sensor}NotOk ->"
        f" p{cap}FP:({var}'={sensor}Ok){set_latch} + p{cap}TN:({var}'={sensor}NotOk){set_latch};",
        "endmodule",
    ]
    return lines


def _timekeeper() -> List[str]:
    return [
        "module timekeeper",
        "  waitTime : [0..timeoutTicks] init 0;",
        "  objectReleaseTimer : [0..releaseTicks] init 0;",
        "  [tick] robotState=waitForGPLUpdate & waitTime+senseInterval<timeoutTicks ->"
        " (waitTime'=waitTime+senseInterval);",
        "  [tick] robotState=waitForGPLUpdate & waitTime+senseInterval>=timeoutTicks -> (waitTime'=timeoutTicks);",
        "  [tick] robotState=GPLOk & objectReleaseTimer<releaseTicks ->"
        " (objectReleaseTimer'=objectReleaseTimer+1);",
        "  [GPLOkSet] true -> (objectReleaseTimer'=0);",
        "endmodule",
    ]


def render_variant(variant: ScenarioVariant) -> str:
    """Model source text of *variant* with the default constant values"""
    blocks = [["dtmc", ""] + _constants(variant), _human()]
    blocks += [_truth(sensor) for sensor in SENSORS]
    if variant.proximity_module:
        blocks.append(_proximity())
    blocks.append(_robot(variant))
    blocks += [_sensor(sensor, variant.one_shot_sensors) for sensor in SENSORS]
    blocks.append(_timekeeper())
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"


def build_variant(variant: ScenarioVariant, overrides: Optional[Mapping[str, Value]] = None) -> Model:
    """
    Parse the rendered variant and apply its constant overrides (then any
    extra *overrides*, which win).
    """
    if variant.sensing_rounds < 1 or variant.timeout_ticks < 1 or variant.release_ticks < 0:
        raise ValueError("sensing_rounds and timeout_ticks must be positive, release_ticks non-negative")
    model = parse_model(render_variant(variant), name=variant.name)
    combined: Dict[str, Value] = dict(variant.overrides)
    combined.update(overrides or {})
    model = set_constants(model, combined)
    logger.debug(f"[Scenario] Built variant '{variant.name}' with {len(combined)} override(s)")
    return model


BASELINE = ScenarioVariant()
REFINED = ScenarioVariant(
    one_shot_sensors=True,
    gripper_failure=True,
    motion_failure=True,
    proximity_module=True,
    overrides=CALIBRATED_CONSTANTS,
)
