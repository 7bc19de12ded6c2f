"""
Offline verdicts recomputed from a recorded trace.

Works on whole traces (index lookups rather than step-wise state), so it
doubles as an independent check of the online monitors: for every trace
``replay(trace, params)`` must equal the verdicts returned by ``run_test``.
"""

from typing import Callable, Dict, List, Optional

from .schemas import AssertionVerdict, ScenarioParams, TestTrace, TraceStep

_DECISIONS = {"decision_release", "decision_no_release", "timeout"}


def _index_of(rows: List[TraceStep], event: str, start: int = 0) -> Optional[int]:
    return next((i for i in range(start, len(rows)) if rows[i].event == event), None)


def _gpl_detected(row: TraceStep, params: ScenarioParams) -> bool:
    return bool(row.gaze_ok and row.location_tracked and row.pressure_force_N >= params.pressure_threshold_N)


def _unsettled(outcome: str) -> str:
    if outcome == "runtime_error":
        return "run aborted by a runtime error"
    return f"no resolution before outcome {outcome}"


def _verdict(monitor: str, at: Optional[int], result: Optional[str] = None, detail: str = "") -> AssertionVerdict:
    if at is None:
        return AssertionVerdict(monitor=monitor, triggered=False)
    return AssertionVerdict(monitor=monitor, triggered=True, result=result, trigger_step=at, detail=detail)


def _m1(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    rows = trace.steps
    at = _index_of(rows, "grasp")
    if at is None:
        return _verdict("M1", None)
    done = _index_of(rows, "sensing_done", at)
    end = done if done is not None else len(rows) - 1
    lost = next((i for i in range(at, end + 1) if not rows[i].object_in_hand), None)
    if lost is not None:
        return _verdict("M1", at, "fail", f"object contact lost at step {lost}")
    if done is not None and not _gpl_detected(rows[done], params):
        return _verdict("M1", at, "fail", f"GPL not detected at step {done}")
    if done is not None and _index_of(rows, "released", done) is not None:
        return _verdict("M1", at, "pass")
    if trace.outcome == "runtime_error":
        return _verdict("M1", at, "unresolved", _unsettled(trace.outcome))
    return _verdict("M1", at, "fail", f"object not released (outcome {trace.outcome})")


def _mgrip(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    rows = trace.steps
    at = _index_of(rows, "grasp")
    if at is None:
        return _verdict("Mgrip", None)
    for i in range(at, len(rows)):
        if not rows[i].object_in_hand and rows[i].event != "released":
            return _verdict("Mgrip", at, "fail", f"object dropped at step {i}")
        if rows[i].event in _DECISIONS:
            return _verdict("Mgrip", at, "pass")
    return _verdict("Mgrip", at, "unresolved", _unsettled(trace.outcome))


def _sensing_monitor(trace: TestTrace, params: ScenarioParams, monitor: str, detected: bool) -> AssertionVerdict:
    rows = trace.steps
    done = _index_of(rows, "sensing_done")
    if done is None or _gpl_detected(rows[done], params) != detected:
        return _verdict(monitor, None)
    released = _index_of(rows, "released", done + 1)
    if detected:
        if released is not None:
            return _verdict(monitor, done, "pass")
        return _verdict(monitor, done, "fail", f"GPL detected but object not released (outcome {trace.outcome})")
    if released is not None:
        return _verdict(monitor, done, "fail", f"object released at step {released} without GPL")
    return _verdict(monitor, done, "pass")


def _m2(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    return _sensing_monitor(trace, params, "M2", detected=False)


def _m3(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    return _sensing_monitor(trace, params, "M3", detected=True)


def _m4(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    rows = trace.steps
    at = _index_of(rows, "activated")
    if at is None:
        return _verdict("M4", None)
    decided = next((i for i in range(at, len(rows)) if rows[i].event in _DECISIONS), None)
    if decided is None:
        return _verdict("M4", at, "fail", f"no decision (outcome {trace.outcome})")
    done = _index_of(rows, "sensing_done", at)
    if done is not None and done < decided:
        late = rows[decided].time_s - rows[done].time_s
        if late > params.decision_window_s + 1e-9:
            return _verdict("M4", at, "fail", f"decision {late:.1f} s after sensing")
    return _verdict("M4", at, "pass")


def _m5(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    at = _index_of(trace.steps, "activated")
    if at is None:
        return _verdict("M5", None)
    if trace.outcome == "runtime_error":
        return _verdict("M5", at, "fail", "run ended in runtime_error")
    return _verdict("M5", at, "pass")


def _m6(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    rows = trace.steps
    at = next(
        (i for i, row in enumerate(rows)
         if row.gripper_closing and row.human_robot_distance_mm < params.close_threshold_mm),
        None,
    )
    if at is None:
        return _verdict("M6", None)
    if at + 1 >= len(rows):
        return _verdict("M6", at, "unresolved", _unsettled(trace.outcome))
    if rows[at + 1].gripper_closing:
        return _verdict("M6", at, "fail", f"gripper still closing at step {at + 1}")
    return _verdict("M6", at, "pass")


def _m7(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    window = [row for row in trace.steps if row.time_s < params.reset_window_s - 1e-9]
    for row in window:
        if row.hand_speed_mm_s > params.speed_limit_mm_s:
            return _verdict("M7", 0, "fail", f"{row.hand_speed_mm_s:.0f} mm/s at step {row.step}")
    if len(window) == len(trace.steps):
        return _verdict("M7", 0, "unresolved", _unsettled(trace.outcome))
    return _verdict("M7", 0, "pass")


def _m8(trace: TestTrace, params: ScenarioParams) -> AssertionVerdict:
    near = [row for row in trace.steps if row.human_robot_distance_mm < params.near_threshold_mm]
    if not near:
        return _verdict("M8", None)
    for row in near:
        if row.hand_speed_mm_s >= params.speed_limit_mm_s:
            detail = f"{row.hand_speed_mm_s:.0f} mm/s at {row.human_robot_distance_mm:.0f} mm"
            return _verdict("M8", near[0].step, "fail", detail)
    return _verdict("M8", near[0].step, "pass")


_OFFLINE: Dict[str, Callable[[TestTrace, ScenarioParams], AssertionVerdict]] = {
    "M1": _m1,
    "Mgrip": _mgrip,
    "M2": _m2,
    "M3": _m3,
    "M4": _m4,
    "M5": _m5,
    "M6": _m6,
    "M7": _m7,
    "M8": _m8,
}


def replay(trace: TestTrace, params: ScenarioParams) -> List[AssertionVerdict]:
    """Verdicts of every monitor, in the same order run_test returns them"""
    return [check(trace, params) for check in _OFFLINE.values()]
