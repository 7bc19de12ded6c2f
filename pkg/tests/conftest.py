"""
Shared fixtures: the shipped handover models, their chains and small
hand-made chains.
"""

import pytest

from chain.builder import build_chain
from chain.model import Chain
from modellang.parser import load_model
from scenario.requirements import DATA_DIR, MODELS_DIR, REQUIREMENTS_FILE

REFINED_MODEL = MODELS_DIR / "handover_refined.gcm"
BASELINE_MODEL = MODELS_DIR / "handover_baseline.gcm"
EXPERIMENTS = DATA_DIR / "experiments.json"
CAMPAIGN_DEFAULT = DATA_DIR / "campaign_default.json"

REFINED_SUCCESS = 0.8803785717422283


@pytest.fixture(scope="session")
def refined_model():
    return load_model(REFINED_MODEL)


@pytest.fixture(scope="session")
def refined_chain(refined_model):
    return build_chain(refined_model)


@pytest.fixture(scope="session")
def baseline_model():
    return load_model(BASELINE_MODEL)


@pytest.fixture(scope="session")
def baseline_chain(baseline_model):
    return build_chain(baseline_model)


@pytest.fixture
def coin_chain() -> Chain:
    """0 → 1 (0.3) | 2 (0.7); 1 and 2 absorbing"""
    return Chain.from_rows([
        [(1, 0.3), (2, 0.7)],
        [(1, 1.0)],
        [(2, 1.0)],
    ])


@pytest.fixture
def requirements_file():
    return REQUIREMENTS_FILE
