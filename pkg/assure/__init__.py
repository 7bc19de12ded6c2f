"""
Assurance records, confidence intervals, cross-technique comparison,
calibration and the assurance ledger
"""

from .calibrate import MODE_CONSTANTS, calibrate
from .compare import compare, consensus_statement
from .interval import interval
from .ledger import AssuranceLedger, ledger_append, ledger_query
from .records import counted, experiment_assurances, formal_assurance, new_assurance, simulation_assurance
from .schemas import (
    CAUSE_CHECKLIST, AgreementReport, Assurance, Consensus, FailureRates, Interval, ModeRate, PairDifference,
    Provenance,
)

__all__ = [
    'MODE_CONSTANTS', 'calibrate',
    'compare', 'consensus_statement',
    'interval',
    'AssuranceLedger', 'ledger_append', 'ledger_query',
    'counted', 'experiment_assurances', 'formal_assurance', 'new_assurance', 'simulation_assurance',
    'CAUSE_CHECKLIST', 'AgreementReport', 'Assurance', 'Consensus', 'FailureRates', 'Interval', 'ModeRate',
    'PairDifference', 'Provenance',
]
