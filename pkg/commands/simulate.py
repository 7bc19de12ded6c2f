"""
simulate - run a seeded simulation campaign.
"""

import argparse
import logging
from pathlib import Path
from typing import Optional

from core_utils import atomic_write_text
from scenario.requirements import DATA_DIR
from simtest.campaign import CampaignResult, run_campaign
from simtest.schemas import CampaignConfig, load_campaign_config, parse_campaign_config
from simtest.traceio import write_trace_csv

from .common import emit_json, load_constants_file

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = DATA_DIR / "campaign_default.json"


def campaign_config(
    config_path: Optional[str],
    runs: Optional[int] = None,
    seed: Optional[int] = None,
    constants_path: Optional[str] = None,
) -> CampaignConfig:
    """
    Campaign config from a file (the shipped default when absent) with
    command-line overrides applied.

    Raises:
        InvalidParams, SchemaError
    """
    config = load_campaign_config(config_path or DEFAULT_CONFIG)
    data = config.model_dump()
    if runs is not None:
        data["n"] = runs
    if seed is not None:
        data["seed"] = seed
    config = parse_campaign_config(data)
    if constants_path:
        params = config.params.with_constants(load_constants_file(constants_path))
        config = config.model_copy(update={"params": params})
    return config


def write_outputs(result: CampaignResult, out: Optional[str], coverage: Optional[str], traces: Optional[str]) -> None:
    emit_json(result.report.model_dump(), out)

    coverage_path = coverage or (str(Path(out).with_suffix(".coverage.csv")) if out else None)
    if coverage_path:
        atomic_write_text(coverage_path, result.coverage.to_csv())

    if traces:
        for record in result.records:
            write_trace_csv(record.trace, Path(traces) / f"test_{record.index:05d}.csv")
        logger.info(f"[Simulate] 💾 {len(result.records)} trace(s) in {traces}")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = campaign_config(args.config, args.runs, args.seed, args.constants)
    result = run_campaign(config, workers=args.workers)
    write_outputs(result, args.out, args.coverage, args.traces)
    return 0
