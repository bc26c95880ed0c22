"""Logging configuration for handheadkit."""

import logging
import sys
import warnings
from pathlib import Path
from typing import Optional

DEFAULT_FORMAT = "[%(asctime)s] %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO", log_file: Optional[Path] = None, format_string: Optional[str] = None) -> None:
    """
    Configure the root logger.

    Warnings issued through ``warnings.warn`` (e.g. TooShortWarning) are routed into logging.

    Args:
        level: Logging level name; unknown names fall back to INFO
        log_file: Optional file that receives a copy of every record
        format_string: Optional custom format string
    """
    format_string = format_string or DEFAULT_FORMAT
    numeric_level = getattr(logging, level.upper(), None)
    if not isinstance(numeric_level, int):
        numeric_level = logging.INFO

    formatter = logging.Formatter(format_string)
    handlers: list[logging.Handler] = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(numeric_level)
    console_handler.setFormatter(formatter)
    handlers.append(console_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(numeric_level)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    logging.basicConfig(level=numeric_level, format=format_string, handlers=handlers, force=True)
    # Re-install even when capture is already on
    logging.captureWarnings(False)
    logging.captureWarnings(True)
    warnings.simplefilter("default")

