"""
Model constants from experiment counts.

Each failure mode's rate is occurrences over opportunities, rounded to nine
decimals to match how the constants are written in the model files. A mode
the experiments never saw but the attached simulation did falls back to the
simulation estimate. False-positive modes without opportunities are not
observable and are emitted as an assumed 0.
"""

import logging
from typing import Dict, Tuple

from errors import ZeroOpportunities
from scenario.calibration import FAILURE_MODES, OPTIONAL_MODES, CalibrationDataset, ModeCount

from .schemas import FailureRates, ModeRate

logger = logging.getLogger(__name__)

DECIMALS = 9

# Failure mode → (model constant, its complement)
MODE_CONSTANTS: Dict[str, Tuple[str, str]] = {
    "grip": ("pGripperFailure", "pGripperOk"),
    "runtime_error": ("pMotionFailure", "pMotionOk"),
    "gaze_fn": ("pGazeFN", "pGazeTP"),
    "pressure_fn": ("pPressureFN", "pPressureTP"),
    "location_fn": ("pLocationFN", "pLocationTP"),
    "gaze_fp": ("pGazeFP", "pGazeTN"),
    "pressure_fp": ("pPressureFP", "pPressureTN"),
    "location_fp": ("pLocationFP", "pLocationTN"),
}


def _literal(value: float) -> float:
    return round(value, DECIMALS)


def _from_simulation(count: ModeCount, fallback: ModeCount) -> ModeRate:
    return ModeRate(
        occ=count.occ,
        opp=count.opp,
        rate=count.occ / count.opp if count.opp else None,
        source="simulation",
        fallback_occ=fallback.occ,
        fallback_opp=fallback.opp,
        fallback_rate=fallback.occ / fallback.opp,
    )


def _mode_rate(mode: str, count: ModeCount, dataset: CalibrationDataset) -> ModeRate:
    fallback = dataset.simulation.modes.get(mode) if dataset.simulation is not None else None

    if count.opp == 0:
        if fallback is not None and fallback.opp > 0:
            return _from_simulation(count, fallback)
        if mode in FAILURE_MODES:
            raise ZeroOpportunities(f"failure mode '{mode}' has no opportunities; its rate is not observable")
        return ModeRate(occ=0, opp=0, rate=None, source="assumed", observable=False)

    if count.occ == 0 and fallback is not None and fallback.occ > 0:
        logger.info(f"[Calibrate] '{mode}' never occurred in the experiments; using simulation "
                    f"{fallback.occ}/{fallback.opp}")
        return _from_simulation(count, fallback)
    return ModeRate(occ=count.occ, opp=count.opp, rate=count.occ / count.opp)


def calibrate(dataset: CalibrationDataset) -> Tuple[FailureRates, Dict[str, float]]:
    """
    Failure rates and the constant set they imply.

    Returns:
        (rates with numerators and denominators, {constant: value}) where every
        failure constant is paired with its complement

    Raises:
        ZeroOpportunities: a required mode without opportunities and no
                           simulation estimate to fall back on
    """
    modes: Dict[str, ModeRate] = {}
    for mode in FAILURE_MODES + OPTIONAL_MODES:
        count = dataset.modes.get(mode)
        if count is None:
            if mode in OPTIONAL_MODES:
                count = ModeCount(occ=0, opp=0)
            else:
                raise ZeroOpportunities(f"failure mode '{mode}' is missing")
        modes[mode] = _mode_rate(mode, count, dataset)

    constants: Dict[str, float] = {}
    for mode, entry in modes.items():
        name, complement = MODE_CONSTANTS[mode]
        value = _literal(entry.emitted) if entry.emitted is not None else 0.0
        constants[name] = value
        constants[complement] = _literal(1.0 - value)

    rates = FailureRates(modes=modes)
    for mode in rates.flagged():
        logger.warning(f"[Calibrate] ⚠️ '{mode}' is not observable (no opportunities); assuming 0")
    logger.info(f"[Calibrate] ✅ {len(constants)} constants from {dataset.tests} tests")
    return rates, constants
