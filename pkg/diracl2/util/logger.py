from __future__ import annotations

import logging
import os
from pathlib import Path

_LOGGER_CACHE: dict[str, logging.Logger] = {}


def _log_dir() -> Path:
    override = os.environ.get("DIRACL2_LOG_DIR")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent.parent.parent / "logs"


def get_logger(name: str = "diracl2") -> logging.Logger:
    if name in _LOGGER_CACHE:
        return _LOGGER_CACHE[name]

    logger = logging.getLogger(name)
    level = os.environ.get("DIRACL2_LOG_LEVEL", "INFO").upper()
    logger.setLevel(getattr(logging, level, logging.INFO))
    logger.propagate = False

    fmt = logging.Formatter("%(asctime)s | %(levelname)s | %(name)s | %(message)s")

    try:
        log_dir = _log_dir()
        log_dir.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_dir / "system.log", encoding="utf-8")
        file_handler.setFormatter(fmt)
        logger.addHandler(file_handler)
    except OSError:
        # read-only checkout: stream only
        pass

    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(fmt)
    logger.addHandler(stream_handler)

    _LOGGER_CACHE[name] = logger
    return logger
