"""
Lowering an abstract test to a concrete one: every random quantity of the run
is drawn here, in a fixed order, from the test's own generator.
"""

from .schemas import AbstractTest, ConcreteTest, ScenarioParams
from utils.rng import make_rng


def concretize(abstract: AbstractTest, params: ScenarioParams, seed: int, index: int = 0) -> ConcreteTest:
    rng = make_rng(seed)
    # Draw order is part of the reproducibility contract
    pull_force = rng.uniform(params.pull_force_lo_N, params.pull_force_hi_N)
    head_angle = rng.uniform(0.0, params.head_angle_max_deg)
    track_loss = rng.random() < params.track_loss_prob
    grip_fails = rng.random() < params.grip_failure_prob
    motion_error = rng.random() < params.motion_error_prob
    reset_overspeed = rng.random() < params.reset_overspeed_prob
    grasp_intrusion = rng.random() < params.grasp_intrusion_prob

    return ConcreteTest(
        index=index,
        abstract=abstract,
        pull_force_N=float(pull_force),
        head_angle_deg=float(head_angle),
        track_loss=bool(track_loss),
        approach_min_distance_mm=params.approach_min_distance_mm,
        reset_overspeed=bool(reset_overspeed),
        grip_fails=bool(grip_fails),
        motion_error=bool(motion_error),
        grasp_intrusion=bool(grasp_intrusion),
        rng_seed=seed,
    )
