"""
Online assertion monitors.

Each monitor watches the trace step by step: a precondition triggers it, an
assertion then resolves it to pass or fail. A triggered monitor the test never
resolves (the run aborted first) is reported as unresolved.

Usage:
    monitors = build_monitors(params)
    for row in rows:
        for monitor in monitors:
            monitor.observe(row)
    verdicts = [monitor.finish(outcome) for monitor in monitors]
"""

from typing import List, Optional

from .schemas import AssertionVerdict, ScenarioParams, TraceStep

DECISION_EVENTS = ("decision_release", "decision_no_release", "timeout")
RESOLVED_OUTCOMES = ("success", "not_released", "grip_failure", "timeout", "disengaged")
TIME_EPS = 1e-9


def sensors_ok(row: TraceStep, params: ScenarioParams) -> bool:
    """All three GPL cues detected on this step"""
    return row.gaze_ok and row.pressure_force_N >= params.pressure_threshold_N and row.location_tracked


class AssertionMonitor:
    id = ""

    def __init__(self, params: ScenarioParams) -> None:
        self.params = params
        self.trigger_step: Optional[int] = None
        self.result: Optional[str] = None
        self.detail = ""

    @property
    def triggered(self) -> bool:
        return self.trigger_step is not None

    @property
    def open(self) -> bool:
        return self.triggered and self.result is None

    def _trigger(self, row: TraceStep) -> None:
        if not self.triggered:
            self.trigger_step = row.step

    def _resolve(self, result: str, detail: str = "") -> None:
        if self.result is None:
            self.result = result
            self.detail = detail

    def observe(self, row: TraceStep) -> None:
        raise NotImplementedError

    def settle(self, outcome: str) -> None:
        """Resolve an open monitor at the end of the run"""
        if outcome == "runtime_error":
            self._resolve("unresolved", "run aborted by a runtime error")
        else:
            self._resolve("unresolved", f"no resolution before outcome {outcome}")

    def finish(self, outcome: str) -> AssertionVerdict:
        if self.open:
            self.settle(outcome)
        return AssertionVerdict(
            monitor=self.id,
            triggered=self.triggered,
            result=self.result if self.triggered else None,
            trigger_step=self.trigger_step,
            detail=self.detail,
        )


class SuccessMonitor(AssertionMonitor):
    """M1: after the grasp the object stays in hand, the cues are detected and the object is released"""

    id = "M1"

    def __init__(self, params: ScenarioParams) -> None:
        super().__init__(params)
        self.sensing_done = False

    def observe(self, row: TraceStep) -> None:
        if row.event == "grasp":
            self._trigger(row)
        if not self.open:
            return
        if not self.sensing_done and not row.object_in_hand:
            self._resolve("fail", f"object contact lost at step {row.step}")
        elif row.event == "sensing_done":
            self.sensing_done = True
            if not sensors_ok(row, self.params):
                self._resolve("fail", f"GPL not detected at step {row.step}")
        elif row.event == "released":
            self._resolve("pass")

    def settle(self, outcome: str) -> None:
        if outcome == "runtime_error":
            super().settle(outcome)
        else:
            self._resolve("fail", f"object not released (outcome {outcome})")


class GripMonitor(AssertionMonitor):
    """Mgrip: the grasped object stays in hand until the robot decides"""

    id = "Mgrip"

    def observe(self, row: TraceStep) -> None:
        if row.event == "grasp":
            self._trigger(row)
        if not self.open:
            return
        if not row.object_in_hand and row.event != "released":
            self._resolve("fail", f"object dropped at step {row.step}")
        elif row.event in DECISION_EVENTS:
            self._resolve("pass")


class NotReadyMonitor(AssertionMonitor):
    """M2: cues not detected at the end of sensing ⇒ no release"""

    id = "M2"

    def observe(self, row: TraceStep) -> None:
        if row.event == "sensing_done" and not sensors_ok(row, self.params):
            self._trigger(row)
        elif self.open and row.event == "released":
            self._resolve("fail", f"object released at step {row.step} without GPL")

    def settle(self, outcome: str) -> None:
        self._resolve("pass")


class ReadyMonitor(AssertionMonitor):
    """M3: cues detected at the end of sensing ⇒ release"""

    id = "M3"

    def observe(self, row: TraceStep) -> None:
        if row.event == "sensing_done" and sensors_ok(row, self.params):
            self._trigger(row)
        elif self.open and row.event == "released":
            self._resolve("pass")

    def settle(self, outcome: str) -> None:
        if outcome == "runtime_error":
            super().settle(outcome)
        else:
            self._resolve("fail", f"GPL detected but object not released (outcome {outcome})")


class DecisionTimeMonitor(AssertionMonitor):
    """M4: from activation on, a decision is made, within the window after sensing"""

    id = "M4"

    def __init__(self, params: ScenarioParams) -> None:
        super().__init__(params)
        self.sensing_time: Optional[float] = None

    def observe(self, row: TraceStep) -> None:
        if row.event == "activated":
            self._trigger(row)
        if not self.open:
            return
        if row.event == "sensing_done":
            self.sensing_time = row.time_s
        elif row.event in DECISION_EVENTS:
            if self.sensing_time is not None and row.time_s - self.sensing_time > self.params.decision_window_s + TIME_EPS:
                late = row.time_s - self.sensing_time
                self._resolve("fail", f"decision {late:.1f} s after sensing")
            else:
                self._resolve("pass")

    def settle(self, outcome: str) -> None:
        self._resolve("fail", f"no decision (outcome {outcome})")


class OutcomeMonitor(AssertionMonitor):
    """M5: the run ends in release, no release or timeout"""

    id = "M5"

    def observe(self, row: TraceStep) -> None:
        if row.event == "activated":
            self._trigger(row)

    def settle(self, outcome: str) -> None:
        if outcome in RESOLVED_OUTCOMES:
            self._resolve("pass")
        else:
            self._resolve("fail", f"run ended in {outcome}")


class ClosingHandMonitor(AssertionMonitor):
    """M6: human hand within the close threshold while the gripper closes ⇒ gripper stops"""

    id = "M6"

    def observe(self, row: TraceStep) -> None:
        if self.open:
            if row.gripper_closing:
                self._resolve("fail", f"gripper still closing at step {row.step}")
            else:
                self._resolve("pass")
        elif row.gripper_closing and row.human_robot_distance_mm < self.params.close_threshold_mm:
            self._trigger(row)


class RestrictedStartMonitor(AssertionMonitor):
    """M7: hand speed stays within the limit during the reset window"""

    id = "M7"

    def observe(self, row: TraceStep) -> None:
        if row.step == 0:
            self._trigger(row)
        if not self.open:
            return
        if row.time_s >= self.params.reset_window_s - TIME_EPS:
            self._resolve("pass")
        elif row.hand_speed_mm_s > self.params.speed_limit_mm_s:
            self._resolve("fail", f"{row.hand_speed_mm_s:.0f} mm/s at step {row.step}")


class NearSpeedMonitor(AssertionMonitor):
    """M8: whenever the human is within the near threshold, hand speed is below the limit"""

    id = "M8"

    def observe(self, row: TraceStep) -> None:
        if row.human_robot_distance_mm >= self.params.near_threshold_mm:
            return
        self._trigger(row)
        if self.open and row.hand_speed_mm_s >= self.params.speed_limit_mm_s:
            self._resolve("fail", f"{row.hand_speed_mm_s:.0f} mm/s at {row.human_robot_distance_mm:.0f} mm")

    def settle(self, outcome: str) -> None:
        self._resolve("pass")


MONITOR_CLASSES = (
    SuccessMonitor,
    GripMonitor,
    NotReadyMonitor,
    ReadyMonitor,
    DecisionTimeMonitor,
    OutcomeMonitor,
    ClosingHandMonitor,
    RestrictedStartMonitor,
    NearSpeedMonitor,
)


def build_monitors(params: ScenarioParams) -> List[AssertionMonitor]:
    return [cls(params) for cls in MONITOR_CLASSES]
