"""
check - build the chain of a model and evaluate a property file on it.
"""

import argparse
import logging
import time

from chain.builder import build_chain
from chain.dump import dump_chain
from propcheck.checker import check
from propcheck.parser import load_properties

from .common import emit_json, prepare_model

logger = logging.getLogger(__name__)


def cmd_check(args: argparse.Namespace) -> int:
    """
    Returns:
        0 when every bound holds, 1 when a bound query is false
    """
    model = prepare_model(args.model, args.constants, args.const)

    started = time.perf_counter()
    chain = build_chain(model, policy="uniform" if args.uniform_scheduler else "reject")
    build_ms = round((time.perf_counter() - started) * 1000.0, 3)
    if args.dump_chain:
        dump_chain(chain, args.dump_chain)
        logger.info(f"[Check] 💾 Chain written to {args.dump_chain}")

    queries = load_properties(args.prop, model)
    results = [
        check(chain, query, model=model, method=args.method, timings=args.timings, build_time_ms=build_ms)
        for query in queries
    ]

    emit_json({
        "model": model.name,
        "states": chain.n_states,
        "transitions": chain.n_transitions,
        "results": [result.model_dump(exclude_none=True) for result in results],
    }, args.out)

    violated = [r for r in results if r.verdict is False]
    if violated:
        logger.warning(f"[Check] ❌ {len(violated)} bound(s) violated: "
                       f"{', '.join(r.name or r.property for r in violated)}")
        return 1
    return 0
