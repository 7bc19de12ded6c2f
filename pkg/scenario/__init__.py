"""
Handover scenario: model family, requirement library and experiment data
"""

from .calibration import CalibrationDataset, ModeCount, load_calibration, parse_calibration
from .requirements import DATA_DIR, MODELS_DIR, REQUIREMENTS_FILE, RequirementSpec, requirement, requirement_library
from .variants import BASELINE, CALIBRATED_CONSTANTS, REFINED, ScenarioVariant, build_variant, render_variant

__all__ = [
    'CalibrationDataset', 'ModeCount', 'load_calibration', 'parse_calibration',
    'DATA_DIR', 'MODELS_DIR', 'REQUIREMENTS_FILE', 'RequirementSpec', 'requirement', 'requirement_library',
    'BASELINE', 'CALIBRATED_CONSTANTS', 'REFINED', 'ScenarioVariant', 'build_variant', 'render_variant',
]
