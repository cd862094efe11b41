# diracl2/storage/report_writer.py
"""
JSON reports and CSV sweep tables.

Reports carry no timestamps or worker counts, so identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

from ..util.logger import get_logger

logger = get_logger("diracl2.storage")


def dumps_report(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    """Keep the last good file as .bak, then replace through a .tmp sibling."""
    path.parent.mkdir(parents=True, exist_ok=True)
    backup = path.with_name(path.name + ".bak")
    if path.exists():
        try:
            backup.write_text(path.read_text(encoding="utf-8"), encoding="utf-8")
        except OSError as exc:
            logger.warning("could not back up %s: %s", path, exc)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    tmp.replace(path)


def write_report(payload: Mapping[str, Any], path: Optional[Path]) -> str:
    """Serialize and write a report; path=None only returns the text."""
    text = dumps_report(payload)
    if path is not None:
        _atomic_write(Path(path), text)
        logger.info("report written: %s", path)
    return text


def read_report(path: Path) -> Dict[str, Any]:
    """Load a report, falling back to the .bak copy if the main file is unreadable."""
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError):
        backup = path.with_name(path.name + ".bak")
        logger.warning("report %s unreadable, trying %s", path, backup)
        return json.loads(backup.read_text(encoding="utf-8"))


def _fmt(value: Any, precision: int) -> Any:
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return f"{value:.{precision}g}"
    return value


def dumps_rows(rows: Iterable[Mapping[str, Any]], columns: Sequence[str], precision: int = 12) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k), precision) for k in columns})
    return buf.getvalue()


def write_rows(rows: Iterable[Mapping[str, Any]], columns: Sequence[str], path: Optional[Path],
               precision: int = 12) -> str:
    """CSV with a fixed header; floats in %.{precision}g, missing values empty."""
    text = dumps_rows(rows, columns, precision)
    if path is not None:
        _atomic_write(Path(path), text)
        logger.info("sweep table written: %s", path)
    return text
