"""
Logging setup for the Legendre duality toolkit.
"""
import logging
import sys
from pathlib import Path

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
ROOT_LOGGER = "src"

_configured = False


def setup_logging(level: int | str | None = None, log_file: Path | None = None) -> logging.Logger:
    """
    Configure the package logger tree.

    Args:
        level: Logging level; INFO by default, DEBUG when the config enables debug mode
        log_file: Optional file receiving a copy of every record

    Returns:
        The package root logger
    """
    global _configured
    from src.config import default_config

    logger = logging.getLogger(ROOT_LOGGER)
    if level is None:
        level = logging.DEBUG if default_config.DEBUG_MODE else logging.INFO
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logger.setLevel(level)

    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.propagate = False
        _configured = True

    if log_file is not None:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

    return logger
