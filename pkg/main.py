"""
assurekit - assurance-based verification of a human-robot handover

Command line front end for the four workflows:

  check      probability queries on a guarded-command model
  simulate   seeded simulation campaign with assertion monitors
  assure     formal + simulation + experiment assurances, reconciled
  calibrate  model constants from experiment counts

Exit codes: 0 ok / agreement, 1 bound violated, 2 input error,
3 nondeterministic model, 4 disagreement, 5 internal or numerical error.
"""

import argparse
import logging
import sys
from typing import List, Optional

from commands import HANDLERS
from config import settings
from errors import AssureKitError, InputError, NondeterminismError

EXIT_INPUT = 2
EXIT_NONDETERMINISM = 3
EXIT_ENGINE = 5

logger = logging.getLogger("assurekit")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NondeterminismError):
        return EXIT_NONDETERMINISM
    if isinstance(exc, InputError):
        return EXIT_INPUT
    return EXIT_ENGINE


def _model_flags(parser: argparse.ArgumentParser, prop_required: bool) -> None:
    parser.add_argument("--model", required=True, help="Model file (.gcm)")
    parser.add_argument("--prop", required=prop_required, help="Property file (.qry)")
    parser.add_argument("--const", action="append", default=[], metavar="NAME=VAL",
                        help="Override a model constant (repeatable)")
    parser.add_argument("--constants", metavar="FILE", help="JSON constants, e.g. calibrate output")
    parser.add_argument("--method", choices=("vi", "exact"), default="vi",
                        help="Reachability solver: value iteration or exact sparse solve")


def _campaign_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Campaign config JSON (default: shipped typical-use config)")
    parser.add_argument("--runs", type=int, help="Number of tests, overrides the config")
    parser.add_argument("--seed", type=int, help="Master seed, overrides the config")
    parser.add_argument("--workers", type=int, default=None, help="Thread pool size")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assurekit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--log-level", default=settings.log_level)
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="Evaluate probability queries on a model")
    _model_flags(p_check, prop_required=True)
    p_check.add_argument("--uniform-scheduler", action="store_true",
                         help="Resolve nondeterminism uniformly instead of rejecting it")
    p_check.add_argument("--timings", action="store_true", help="Add build and check times to the results")
    p_check.add_argument("--out", help="Result JSON file (default: stdout)")
    p_check.add_argument("--dump-chain", metavar="FILE", help="Also write the built chain as JSON")

    p_sim = sub.add_parser("simulate", help="Run a seeded simulation campaign")
    _campaign_flags(p_sim)
    p_sim.add_argument("--constants", metavar="FILE", help="Calibrated constants mapped to simulator parameters")
    p_sim.add_argument("--out", help="Campaign report JSON (default: stdout)")
    p_sim.add_argument("--coverage", help="Coverage table CSV (default: next to --out)")
    p_sim.add_argument("--traces", metavar="DIR", help="Write one trace CSV per test")

    p_assure = sub.add_parser("assure", help="Produce, record and reconcile assurances")
    _model_flags(p_assure, prop_required=False)
    _campaign_flags(p_assure)
    p_assure.add_argument("--tolerance", type=float, default=None,
                          help=f"Agreement tolerance (default {settings.default_tolerance})")
    p_assure.add_argument("--experiments", help="Experiment dataset JSON (default: shipped dataset)")
    p_assure.add_argument("--ledger", help=f"Assurance ledger (default {settings.ledger_path})")
    p_assure.add_argument("--req", action="append", help="Restrict to a requirement id (repeatable)")
    p_assure.add_argument("--out", help="Agreement reports JSON (default: stdout)")

    p_cal = sub.add_parser("calibrate", help="Estimate model constants from experiment counts")
    p_cal.add_argument("--experiments", required=True, help="Experiment dataset JSON")
    p_cal.add_argument("--out", help="Constants JSON (default: stdout)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        return HANDLERS[args.command](args)
    except AssureKitError as exc:
        code = exit_code_for(exc)
        logger.error(f"❌ {type(exc).__name__}: {exc}")
        return code
    except OSError as exc:
        logger.error(f"❌ {exc}")
        return EXIT_INPUT
    except Exception as exc:
        logger.exception(f"❌ Internal error: {exc}")
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
