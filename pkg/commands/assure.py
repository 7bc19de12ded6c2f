"""
assure - run formal checking and a simulation campaign, ingest the experiment
data, record every assurance in the ledger and compare them per requirement.
"""

import argparse
import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from assure.compare import compare
from assure.ledger import AssuranceLedger
from assure.records import experiment_assurances, formal_assurance, new_assurance, simulation_assurance
from assure.schemas import AgreementReport, Assurance
from chain.builder import build_chain
from config import settings
from core_utils import sha256_text
from errors import UnboundAtomIdentifier
from modellang.ast import Model
from modellang.printer import print_model
from propcheck.checker import check
from propcheck.parser import check_atoms, load_properties
from scenario.calibration import load_calibration
from scenario.requirements import DATA_DIR, REQUIREMENTS_FILE, RequirementSpec, requirement_library
from simtest.campaign import run_campaign

from .common import emit_json, prepare_model
from .simulate import campaign_config

logger = logging.getLogger(__name__)

DEFAULT_EXPERIMENTS = DATA_DIR / "experiments.json"


def selected_requirements(wanted: Optional[Sequence[str]]) -> List[RequirementSpec]:
    """Requirement specs matching --req ids (a group id like '1' selects 1a and 1b too)"""
    specs = requirement_library()
    if not wanted:
        return specs
    return [spec for spec in specs if spec.id in wanted or spec.group in wanted]


def formal_assurances(model: Model, prop_path: Path, specs: List[RequirementSpec], method: str) -> List[Assurance]:
    """
    One assurance per checkable query named after a requirement (or its
    group). Queries whose atoms the model does not declare are skipped.
    """
    wanted = {spec.id for spec in specs} | {spec.group for spec in specs}
    queries = [q for q in load_properties(prop_path) if q.name in wanted]
    if not queries:
        return []

    chain = build_chain(model)
    model_hash = sha256_text(print_model(model))
    out = []
    for query in queries:
        try:
            check_atoms(query.formula, model)
        except UnboundAtomIdentifier as exc:
            logger.warning(f"[Assure] ⚠️ Skipping query '{query.name}': {exc}")
            continue
        result = check(chain, query, model=model, method=method)
        if query.mode == "bound":
            out.append(new_assurance(query.name, "formal", "verdict", bool(result.verdict), source_hash=model_hash))
        else:
            out.append(formal_assurance(query.name, result, model_hash))
    return out


def cmd_assure(args: argparse.Namespace) -> int:
    """
    Returns:
        0 when every compared requirement agrees, 4 otherwise
    """
    specs = selected_requirements(args.req)
    groups = sorted({spec.group for spec in specs}, key=lambda g: (len(g), g))

    logger.info("=" * 60)
    logger.info(f"🚀 [Assure] Requirements {', '.join(groups)}")
    logger.info("=" * 60)

    model = prepare_model(args.model, args.constants, args.const)
    assurances = formal_assurances(model, Path(args.prop or REQUIREMENTS_FILE), specs, args.method)

    config = campaign_config(args.config, args.runs, args.seed, args.constants)
    campaign = run_campaign(config, workers=args.workers)
    monitors = {spec.group: spec.monitor for spec in specs if spec.monitor is not None}
    for group in groups:
        if group not in monitors:
            continue
        found = simulation_assurance(group, campaign.report.monitors[monitors[group]],
                                     campaign.report.config_hash, config.seed)
        if found is not None:
            assurances.append(found)

    experiments_path = Path(args.experiments or DEFAULT_EXPERIMENTS)
    dataset = load_calibration(experiments_path)
    dataset_hash = sha256_text(experiments_path.read_text(encoding="utf-8"))
    experiment_groups = [g for g in groups if any(s.group == g and "experiment" in s.checkable_by for s in specs)]
    assurances += experiment_assurances(dataset, experiment_groups, dataset_hash)

    ledger = AssuranceLedger(args.ledger or settings.ledger_path)
    ledger.append(assurances)

    by_group: Dict[str, List[Assurance]] = defaultdict(list)
    for assurance in assurances:
        if assurance.kind != "verdict" and assurance.requirement in groups:
            by_group[assurance.requirement].append(assurance)

    tolerance = settings.default_tolerance if args.tolerance is None else args.tolerance
    reports: List[AgreementReport] = []
    single = []
    for group in groups:
        found = by_group.get(group, [])
        if len(found) < 2:
            single.append({"requirement": group, "assurances": [a.id for a in found]})
            logger.info(f"[Assure] Req {group}: {len(found)} assurance(s), nothing to compare")
            continue
        reports.append(compare(found, tolerance))

    emit_json({
        "tolerance": tolerance,
        "reports": [report.model_dump() for report in reports],
        "uncompared": single,
        "assurances": [a.model_dump(exclude={"created_at"}) for a in assurances],
    }, args.out)

    disagreeing = [r.requirement for r in reports if r.verdict == "disagree"]
    if disagreeing:
        logger.warning(f"[Assure] ❌ Disagreement on Req {', '.join(disagreeing)}")
        return 4
    logger.info("[Assure] ✅ All compared requirements agree")
    return 0
