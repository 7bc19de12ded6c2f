"""
Desk-scale kinematic handover simulator.

A run is stepped at a fixed period through the phases of the handover:

  1. reset        : robot moves to its start pose (restricted speed unless overspeed)
  2. activation   : human activates the robot
  3. reach/grasp  : hand moves to the object and closes on it
  4. plan carry   : motion planner call; a motion error aborts the run
  5. carry        : object carried to the handover location; it may slip out
  6. announce     : robot informs the human, human signals readiness
  7. GPL          : human approaches and applies gaze, pressure and location
  8. sensing      : sensors read the cue for a fixed window
  9. decision     : release iff all three cues are detected

Without a cue the robot waits until the timeout. Faults come from the concrete
test's pre-drawn flags, so a run is a pure function of its ConcreteTest.
"""

import logging
from typing import List, Optional, Tuple

from .monitors import build_monitors
from .schemas import AssertionVerdict, ConcreteTest, ScenarioParams, TestTrace, TraceStep

logger = logging.getLogger(__name__)

REACH_STEPS = 10
GRASP_STEPS = 3
CARRY_STEPS = 10
DROP_AT_CARRY_STEP = 5
APPROACH_STEPS = 5
SENSING_STEPS = 5

MOVE_SPEED_MM_S = 200.0
FAR_MM = 1000.0
OBJECT_MM = 800.0
HANDOVER_MM = 400.0
INTRUSION_MM = 50.0
WALK_AWAY_MM_PER_STEP = 50.0


class _Run:
    """Mutable stepping state of one run"""

    def __init__(self, test: ConcreteTest, params: ScenarioParams) -> None:
        self.test = test
        self.params = params
        self.rows: List[TraceStep] = []
        self.monitors = build_monitors(params)
        self.distance = FAR_MM
        self.holding = False
        self.readings = (False, 0.0, False)

    def emit(self, robot_state: str, *, human_action: str = "", speed: float = 0.0,
             closing: bool = False, event: str = "") -> None:
        step = len(self.rows)
        gaze, force, tracked = self.readings
        row = TraceStep(
            step=step,
            time_s=round(step * self.params.dt_s, 6),
            human_action=human_action,
            robot_state=robot_state,
            gaze_ok=gaze,
            pressure_force_N=force,
            location_tracked=tracked,
            hand_speed_mm_s=speed,
            human_robot_distance_mm=self.distance,
            gripper_closing=closing,
            object_in_hand=self.holding,
            event=event,
        )
        self.rows.append(row)
        for monitor in self.monitors:
            monitor.observe(row)

    def steps_for(self, seconds: float) -> int:
        return int(round(seconds / self.params.dt_s))

    # ── Phases ───────────────────────────────────────────────────────────────

    def reset(self) -> None:
        speed = self.params.overspeed_mm_s if self.test.reset_overspeed else self.params.reset_speed_mm_s
        for i in range(self.steps_for(self.params.reset_window_s)):
            self.emit("reset", speed=speed, event="start" if i == 0 else "")

    def activate(self) -> None:
        self.emit("waiting", human_action="ActivateRobot", event="activated")

    def reach_and_grasp(self) -> None:
        self.distance = OBJECT_MM
        for _ in range(REACH_STEPS):
            self.emit("moveHandToObjectLocation", speed=MOVE_SPEED_MM_S)
        if self.test.grasp_intrusion:
            self.distance = INTRUSION_MM
        self.holding = True
        for i in range(GRASP_STEPS):
            self.emit("graspObject", closing=True, event="grasp" if i == 0 else "")
        self.distance = OBJECT_MM

    def plan_carry(self) -> bool:
        if self.test.motion_error:
            self.emit("motionError", event="runtime_error")
            return False
        self.emit("planCarry")
        return True

    def carry(self) -> bool:
        for i in range(1, CARRY_STEPS + 1):
            self.distance = OBJECT_MM + (HANDOVER_MM - OBJECT_MM) * i / CARRY_STEPS
            if self.test.grip_fails and i == DROP_AT_CARRY_STEP:
                self.holding = False
                self.emit("moveHandToHandoverLocation", speed=MOVE_SPEED_MM_S, event="object_dropped")
                self.emit("handoverUnsuccessful", event="decision_no_release")
                return False
            self.emit("moveHandToHandoverLocation", speed=MOVE_SPEED_MM_S)
        return True

    def announce(self) -> None:
        self.emit("informedHumanOfHandoverStart", human_action="WaitForHandoverAnnounce", event="announce")
        self.emit("waitForGPLUpdate", human_action="SignalReady", event="ready")

    def wait_for_timeout(self, ready_step: int, leave_at: Optional[int]) -> None:
        timeout_step = ready_step + self.steps_for(self.params.timeout_s)
        left = False
        while len(self.rows) < timeout_step:
            since_ready = len(self.rows) - ready_step - 1
            if leave_at is not None and since_ready == leave_at:
                left = True
                self.emit("waitForGPLUpdate", human_action="Disengage", event="disengage")
                continue
            if left:
                self.distance = min(self.distance + WALK_AWAY_MM_PER_STEP, 2 * FAR_MM)
            self.emit("waitForGPLUpdate")
        self.emit("timedOut", event="timeout")

    def apply_gpl(self) -> bool:
        gpl = self.test.abstract.find("ApplyGPL")
        start = self.distance
        for i in range(1, APPROACH_STEPS + 1):
            self.distance = start + (self.test.approach_min_distance_mm - start) * i / APPROACH_STEPS
            self.emit("waitForGPLUpdate", human_action="ApplyGPL", event="gpl_applied" if i == 1 else "")

        p = self.params
        self.readings = (
            gpl.gaze == "ok" and self.test.head_angle_deg <= p.gaze_cone_deg,
            self.test.pull_force_N if gpl.pressure == "pull" else 0.0,
            gpl.location == "on-object" and not self.test.track_loss,
        )
        for i in range(SENSING_STEPS):
            self.emit("waitForGPLUpdate", human_action="ApplyGPL",
                      event="sensing_done" if i == SENSING_STEPS - 1 else "")

        gaze, force, tracked = self.readings
        if gaze and force >= p.pressure_threshold_N and tracked:
            self.emit("GPLOk", event="decision_release")
            self.holding = False
            self.emit("handoverSuccessful", event="released")
            return True
        self.emit("GPLNotOk", event="decision_no_release")
        return False

    def run(self) -> str:
        self.reset()
        self.activate()
        self.reach_and_grasp()
        if not self.plan_carry():
            return "runtime_error"
        if not self.carry():
            return "grip_failure"
        self.announce()
        ready_step = len(self.rows) - 1

        leave = self.test.abstract.find("Disengage")
        if leave is not None:
            self.wait_for_timeout(ready_step, leave.at_step)
            return "disengaged"
        if self.test.abstract.find("ApplyGPL") is None:
            self.wait_for_timeout(ready_step, None)
            return "timeout"
        return "success" if self.apply_gpl() else "not_released"


def run_test(test: ConcreteTest, params: ScenarioParams) -> Tuple[TestTrace, List[AssertionVerdict]]:
    """
    Simulate one concrete test with all monitors running online.

    Returns:
        (trace, verdicts) with verdicts in monitor order M1, Mgrip, M2..M8
    """
    run = _Run(test, params)
    outcome = run.run()
    trace = TestTrace(index=test.index, steps=run.rows, outcome=outcome)
    verdicts = [monitor.finish(outcome) for monitor in run.monitors]
    logger.debug(f"[Simulator] Test {test.index}: {outcome} after {len(run.rows)} steps")
    return trace, verdicts
