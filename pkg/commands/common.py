"""
Helpers shared by the command handlers: constant overrides, JSON output.
"""

import json
import logging
import re
import sys
from pathlib import Path
from typing import Dict, Iterable, Optional, Union

from core_utils import atomic_write_text
from errors import SchemaError
from modellang.ast import Model, Value
from modellang.constants import constant_pairs, set_constants
from modellang.parser import load_model

logger = logging.getLogger(__name__)

_INT = re.compile(r"^[+-]?\d+$")


def parse_value(text: str) -> Value:
    lowered = text.strip().lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if _INT.match(lowered):
        return int(lowered)
    try:
        return float(lowered)
    except ValueError:
        raise SchemaError(f"'{text}' is not a number or truth value") from None


def parse_const_flags(flags: Optional[Iterable[str]]) -> Dict[str, Value]:
    """NAME=VAL pairs from repeated --const flags"""
    out: Dict[str, Value] = {}
    for flag in flags or ():
        name, sep, value = flag.partition("=")
        if not sep or not name.strip():
            raise SchemaError(f"--const expects NAME=VALUE, got '{flag}'")
        out[name.strip()] = parse_value(value)
    return out


def load_constants_file(path: Union[str, Path]) -> Dict[str, Value]:
    """
    Constants from a JSON file: either a flat {name: value} object or the
    output of the calibrate command (its "constants" member).

    Raises:
        SchemaError
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if isinstance(data, dict) and isinstance(data.get("constants"), dict):
        data = data["constants"]
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected a JSON object of constants")
    for name, value in data.items():
        if not isinstance(value, (bool, int, float)):
            raise SchemaError(f"{path}: constant '{name}' has non-numeric value {value!r}")
    return dict(data)


def merged_constants(
    model: Model,
    from_file: Optional[Dict[str, Value]],
    from_flags: Optional[Dict[str, Value]],
) -> Dict[str, Value]:
    """
    --const beats the constants file, which beats the model's own values.

    A flag overriding one member of a ``B = 1 - A`` pair drops the file's
    value for the other member so the pair stays consistent.
    """
    merged = dict(from_file or {})
    flags = dict(from_flags or {})
    partners = {}
    for first, second in constant_pairs(model):
        partners[first] = second
        partners[second] = first
    for name in flags:
        partner = partners.get(name)
        if partner is not None and partner not in flags:
            merged.pop(partner, None)
    merged.update(flags)
    return merged


def prepare_model(
    model_path: Union[str, Path],
    constants_path: Optional[Union[str, Path]] = None,
    const_flags: Optional[Iterable[str]] = None,
) -> Model:
    model = load_model(model_path)
    from_file = load_constants_file(constants_path) if constants_path else {}
    constants = merged_constants(model, from_file, parse_const_flags(const_flags))
    return set_constants(model, constants)


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def emit_json(data, out: Optional[Union[str, Path]] = None) -> None:
    """Write JSON to *out* atomically, or to stdout"""
    text = dump_json(data)
    if out:
        atomic_write_text(out, text)
        logger.info(f"💾 Wrote {out}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
