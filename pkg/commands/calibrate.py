"""
calibrate - model constants from the experiment dataset.
"""

import argparse

from assure.calibrate import calibrate
from scenario.calibration import load_calibration

from .common import emit_json


def cmd_calibrate(args: argparse.Namespace) -> int:
    dataset = load_calibration(args.experiments)
    rates, constants = calibrate(dataset)
    emit_json({
        "constants": constants,
        "rates": {mode: entry.model_dump() for mode, entry in rates.modes.items()},
        "not_observable": rates.flagged(),
    }, args.out)
    return 0
