"""
Trace CSV files: one row per simulation step, the outcome on the last row.
"""

import csv
import io
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from core_utils import atomic_write_text
from errors import SchemaError

from .schemas import TestTrace, TraceStep

STEP_COLUMNS = list(TraceStep.model_fields)
TRACE_COLUMNS = ["test", *STEP_COLUMNS, "outcome"]
_BOOL_COLUMNS = {name for name, field in TraceStep.model_fields.items() if field.annotation is bool}


def _cell(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trace_to_csv(trace: TestTrace) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    last = len(trace.steps) - 1
    for i, row in enumerate(trace.steps):
        values = row.model_dump()
        writer.writerow([trace.index, *(_cell(values[name]) for name in STEP_COLUMNS),
                         trace.outcome if i == last else ""])
    return buffer.getvalue()


def write_trace_csv(trace: TestTrace, path: Union[str, Path]) -> Path:
    return atomic_write_text(path, trace_to_csv(trace))


def read_trace_csv(path: Union[str, Path]) -> TestTrace:
    """
    Raises:
        SchemaError: missing columns, empty file or malformed rows
    """
    path = Path(path)
    with path.open(encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [name for name in TRACE_COLUMNS if name not in (reader.fieldnames or [])]
        if missing:
            raise SchemaError(f"{path}: missing trace columns {', '.join(missing)}")
        records = list(reader)
    if not records:
        raise SchemaError(f"{path}: trace has no steps")

    try:
        steps = [
            TraceStep.model_validate({
                name: (record[name] == "1") if name in _BOOL_COLUMNS else record[name]
                for name in STEP_COLUMNS
            })
            for record in records
        ]
        return TestTrace(index=int(records[0]["test"]), steps=steps, outcome=records[-1]["outcome"])
    except (ValidationError, ValueError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc
