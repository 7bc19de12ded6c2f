"""
Seeded desk-scale handover testbench: test generation, simulation, assertion
monitors and coverage
"""

from .campaign import CampaignResult, TestRecord, run_campaign
from .concretize import concretize
from .coverage import CoverageEntry, CoverageTable, coverage_report
from .generator import generate_abstract_tests
from .replay import replay
from .schemas import (
    AbstractTest, AssertionVerdict, CampaignConfig, CampaignReport, ConcreteTest, HumanAction, ScenarioParams,
    TestTrace, TraceStep, load_campaign_config, parse_campaign_config, parse_params,
)
from .simulator import run_test
from .traceio import read_trace_csv, trace_to_csv, write_trace_csv

__all__ = [
    'CampaignResult', 'TestRecord', 'run_campaign',
    'concretize',
    'CoverageEntry', 'CoverageTable', 'coverage_report',
    'generate_abstract_tests',
    'replay',
    'AbstractTest', 'AssertionVerdict', 'CampaignConfig', 'CampaignReport', 'ConcreteTest', 'HumanAction',
    'ScenarioParams', 'TestTrace', 'TraceStep', 'load_campaign_config', 'parse_campaign_config', 'parse_params',
    'run_test',
    'read_trace_csv', 'trace_to_csv', 'write_trace_csv',
]
