"""
Storage utilities for the prefiltering simulator.
Handles atomic output of CSV, JSON and text artifacts plus scalar input files.
"""

import csv
import io
import json
import logging
import os
import tempfile
from typing import Any, Iterable, List, Optional, Sequence

from config.settings import settings
from utils.errors import ScalarParseError

logger = logging.getLogger(__name__)


def format_real(value: float) -> str:
    """Format a real with 17 significant digits and a '.' separator."""
    return format(float(value), ".17g")


def format_cell(value: Any) -> str:
    """Render one CSV cell: reals at full precision, everything else via str."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_real(value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value  # enums
    return str(value)


def parse_scalars(text: str) -> List[float]:
    """
    Parse newline-delimited decimal scalars.

    Blank lines are skipped. Raises ScalarParseError with the 1-based line
    number of the first offending line.
    """
    values = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        try:
            value = float(stripped)
        except ValueError:
            raise ScalarParseError(line_number, stripped) from None
        if value != value or value in (float("inf"), float("-inf")):
            raise ScalarParseError(line_number, stripped)
        values.append(value)
    return values


class OutputManager:
    """Writes experiment artifacts below a base directory, one atomic rename per file."""

    def __init__(self, base_dir: Optional[str] = None):
        """Initialize the manager; the directory is created lazily on first write."""
        self.base_dir = base_dir or settings.OUTPUT_DIR
        logger.debug(f"Initializing OutputManager in: {self.base_dir}")

    def _resolve(self, filename: str) -> str:
        return filename if os.path.isabs(filename) else os.path.join(self.base_dir, filename)

    def write_text(self, content: str, filename: str) -> dict:
        """
        Write text content atomically.

        Args:
            content: Text to write
            filename: Path relative to the base directory, or absolute

        Returns:
            dict: Contains path, bytes and status, or error and status on failure
        """
        path = self._resolve(filename)
        directory = os.path.dirname(path) or "."
        tmp_path = None
        try:
            os.makedirs(directory, exist_ok=True)
            data = content.encode("utf-8")
            fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp_path, path)
            logger.info(f"Wrote {len(data)} bytes to {path}")
            return {"path": path, "bytes": len(data), "status": "success"}
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            if tmp_path and os.path.exists(tmp_path):
                os.unlink(tmp_path)
            return {"path": path, "error": str(e), "status": "failed"}

    def write_csv(self, filename: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> dict:
        """Write a CSV with a header row; reals use 17 significant digits."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([format_cell(cell) for cell in row])
            count += 1
        result = self.write_text(buffer.getvalue(), filename)
        result["rows"] = count
        return result

    def write_json(self, filename: str, payload: Any) -> dict:
        """Write a JSON document with sorted keys."""
        return self.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", filename)

    def read_scalars(self, path: str) -> List[float]:
        """
        Read a newline-delimited scalar file; OSError propagates to the caller.

        Bytes that are not UTF-8 raise ScalarParseError for the line holding them.
        """
        with open(path, "rb") as handle:
            data = handle.read()
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as e:
            line_number = data.count(b"\n", 0, e.start) + 1
            line = data.splitlines()[line_number - 1].decode("utf-8", errors="replace")
            raise ScalarParseError(line_number, line) from None
        values = parse_scalars(text)
        logger.info(f"Read {len(values)} scalars from {path}")
        return values


__all__ = ["OutputManager", "format_real", "format_cell", "parse_scalars"]
