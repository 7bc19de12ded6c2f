"""
Experiment calibration dataset.

Failure modes are counted as occurrences over opportunities. The optional
``simulation`` block carries the same counts from a simulation campaign and
``coverage`` carries per-requirement assertion results of the experiments.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from errors import CountInconsistency, SchemaError

logger = logging.getLogger(__name__)

FAILURE_MODES = ("grip", "gaze_fn", "pressure_fn", "location_fn", "runtime_error")
OPTIONAL_MODES = ("gaze_fp", "pressure_fp", "location_fp")


class ModeCount(BaseModel):
    occ: int = Field(..., ge=0, description="Occurrences of the failure")
    opp: int = Field(..., ge=0, description="Opportunities for the failure")

    @property
    def rate(self) -> Optional[float]:
        return self.occ / self.opp if self.opp else None


class CoverageRow(BaseModel):
    covered: int = Field(..., ge=0)
    passed: int = Field(..., ge=0)

    @property
    def failed(self) -> int:
        return self.covered - self.passed


class CountBlock(BaseModel):
    tests: int = Field(..., ge=0)
    successes: int = Field(..., ge=0)
    modes: Dict[str, ModeCount]


class CalibrationDataset(BaseModel):
    """Experiment counts, plus optional simulation counts and requirement coverage"""

    tests: int = Field(..., ge=1, description="Number of handover tests run")
    successes: int = Field(..., ge=0)
    modes: Dict[str, ModeCount]
    simulation: Optional[CountBlock] = None
    coverage: Dict[str, CoverageRow] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _required_modes(self) -> "CalibrationDataset":
        missing = [mode for mode in FAILURE_MODES if mode not in self.modes]
        if missing:
            raise ValueError(f"missing failure modes: {', '.join(missing)}")
        return self

    @property
    def success_rate(self) -> float:
        return self.successes / self.tests


def check_counts(dataset: CalibrationDataset) -> None:
    """Raise CountInconsistency unless occ ≤ opp ≤ tests everywhere"""
    blocks = [("experiments", dataset.tests, dataset.successes, dataset.modes)]
    if dataset.simulation is not None:
        sim = dataset.simulation
        blocks.append(("simulation", sim.tests, sim.successes, sim.modes))

    for where, tests, successes, modes in blocks:
        if successes > tests:
            raise CountInconsistency(f"{where}: {successes} successes out of {tests} tests")
        for mode, count in modes.items():
            if count.occ > count.opp:
                raise CountInconsistency(f"{where}: mode '{mode}' has {count.occ} occurrences over {count.opp} opportunities")
            if count.opp > tests:
                raise CountInconsistency(f"{where}: mode '{mode}' has {count.opp} opportunities but only {tests} tests")

    for req, row in dataset.coverage.items():
        if row.passed > row.covered or row.covered > dataset.tests:
            raise CountInconsistency(f"coverage of Req {req}: {row.passed} passed of {row.covered} covered")


def parse_calibration(data: dict) -> CalibrationDataset:
    try:
        dataset = CalibrationDataset.model_validate(data)
    except ValidationError as exc:
        raise SchemaError(f"calibration data does not match the schema: {exc}") from exc
    check_counts(dataset)
    return dataset


def load_calibration(path: Union[str, Path]) -> CalibrationDataset:
    """
    Load a calibration JSON file.

    Raises:
        SchemaError: unreadable JSON or schema mismatch
        CountInconsistency: occurrences above opportunities, opportunities above tests
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    dataset = parse_calibration(data)
    logger.info(f"[Calibration] ✅ Loaded {path.name}: {dataset.successes}/{dataset.tests} successes")
    return dataset
