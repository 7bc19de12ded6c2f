"""
core_utils.py - assurekit
=========================
Small file-handling utilities shared by the commands and the ledger.

  1. atomic_write_text()  : write-temp-then-rename so readers never see a
     half-written result file.
  2. FileLock             : exclusive lock file acquired with tenacity
     exponential backoff; serialises ledger appends across processes.
  3. sha256_text()        : content hash used in assurance provenance.
"""

import hashlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional, Union

from tenacity import RetryError, retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from config import settings
from errors import LedgerLockTimeout

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


# ── Phase 1: Atomic writes ────────────────────────────────────────────────────

def atomic_write_text(path: PathLike, text: str) -> Path:
    """
    Write *text* to *path* atomically.

    The content goes to a temporary file in the same directory first and is
    then moved over the target with os.replace, which is atomic on POSIX and
    Windows when source and target share a filesystem.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.debug("💾 Wrote %s (%d bytes)", target, len(text))
    return target


# ── Phase 2: Inter-process lock ───────────────────────────────────────────────

class FileLock:
    """
    Exclusive lock implemented as an O_EXCL lock file next to the guarded file.

    Usage::

        with FileLock("ledger.jsonl"):
            ...  # single writer here
    """

    def __init__(self, path: PathLike, attempts: Optional[int] = None) -> None:
        self.lock_path = Path(f"{path}.lock")
        self.attempts = attempts or settings.ledger_lock_attempts

    def _try_acquire(self) -> None:
        fd = os.open(self.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)

    def acquire(self) -> None:
        acquire_with_retry = retry(
            retry=retry_if_exception_type(FileExistsError),
            stop=stop_after_attempt(self.attempts),
            wait=wait_exponential(multiplier=0.01, min=0.01, max=0.5),
        )(self._try_acquire)
        try:
            acquire_with_retry()
        except RetryError as exc:
            logger.error("❌ Could not acquire %s after %d attempts", self.lock_path, self.attempts)
            raise LedgerLockTimeout(f"lock {self.lock_path} is held by another writer") from exc

    def release(self) -> None:
        try:
            os.unlink(self.lock_path)
        except FileNotFoundError:
            logger.warning("⚠️ Lock file %s vanished before release", self.lock_path)

    def __enter__(self) -> "FileLock":
        self.acquire()
        return self

    def __exit__(self, *exc_info) -> None:
        self.release()


# ── Phase 3: Hashing ──────────────────────────────────────────────────────────

def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
