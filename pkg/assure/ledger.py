"""
Append-only assurance ledger (JSON lines).

Appends hold an exclusive lock file so concurrent writers never interleave
lines; reads take no lock.

``created_at`` is wall-clock metadata stamped on append. It is not part of an
assurance's identity: ids are hashed before stamping, and agreement reports
leave the field out, so only the ledger file itself varies between runs.
"""

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, List, Optional, Union

from pydantic import ValidationError

from config import settings
from core_utils import FileLock
from errors import CorruptLedger

from .schemas import Assurance

logger = logging.getLogger(__name__)


class AssuranceLedger:
    """
    Usage:
        ledger = AssuranceLedger("assurance_ledger.jsonl")
        ledger.append([assurance])
        ledger.query(requirement="1")
    """

    def __init__(self, path: Union[str, Path, None] = None, lock_attempts: Optional[int] = None) -> None:
        self.path = Path(path or settings.ledger_path)
        self.lock_attempts = lock_attempts

    def append(self, assurances: Iterable[Assurance]) -> List[Assurance]:
        """Write *assurances* at the end of the ledger, stamping created_at where unset"""
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        written = [a if a.created_at else a.model_copy(update={"created_at": stamp}) for a in assurances]
        if not written:
            return written

        self.path.parent.mkdir(parents=True, exist_ok=True)
        with FileLock(self.path, attempts=self.lock_attempts):
            with self.path.open("a", encoding="utf-8") as handle:
                for assurance in written:
                    handle.write(assurance.model_dump_json() + "\n")
        logger.info(f"[Ledger] ✅ Appended {len(written)} assurance(s) to {self.path}")
        return written

    def read(self) -> List[Assurance]:
        """
        Raises:
            CorruptLedger: a line that is not a valid assurance
        """
        if not self.path.exists():
            return []
        records = []
        with self.path.open(encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    records.append(Assurance.model_validate_json(line))
                except ValidationError as exc:
                    raise CorruptLedger(f"{self.path}:{lineno}: {exc}") from exc
        return records

    def query(self, requirement: Optional[str] = None, technique: Optional[str] = None) -> List[Assurance]:
        return [
            a for a in self.read()
            if (requirement is None or a.requirement == requirement)
            and (technique is None or a.technique == technique)
        ]


def ledger_append(path: Union[str, Path], assurances: Iterable[Assurance]) -> List[Assurance]:
    return AssuranceLedger(path).append(assurances)


def ledger_query(
    path: Union[str, Path],
    requirement: Optional[str] = None,
    technique: Optional[str] = None,
) -> List[Assurance]:
    return AssuranceLedger(path).query(requirement=requirement, technique=technique)
