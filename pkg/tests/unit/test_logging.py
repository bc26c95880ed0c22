"""Tests for logging configuration."""

import logging
import warnings
from pathlib import Path

from handheadkit.core.signals import TooShortWarning
from handheadkit.utils.logging import setup_logging


def test_setup_logging_default() -> None:
    """Test logging setup with default configuration."""
    setup_logging()
    logger = logging.getLogger()
    assert logger.level == logging.INFO


def test_setup_logging_debug_level() -> None:
    """Test logging setup with DEBUG level."""
    setup_logging(level="DEBUG")
    logger = logging.getLogger()
    assert logger.level == logging.DEBUG


def test_setup_logging_warning_level() -> None:
    """Test logging setup with WARNING level."""
    setup_logging(level="WARNING")
    logger = logging.getLogger()
    assert logger.level == logging.WARNING


def test_setup_logging_invalid_level() -> None:
    """Test logging setup with invalid level defaults to INFO."""
    setup_logging(level="INVALID")
    logger = logging.getLogger()
    assert logger.level == logging.INFO


def test_setup_logging_case_insensitive() -> None:
    """Test that log level is case insensitive."""
    setup_logging(level="info")
    logger = logging.getLogger()
    assert logger.level == logging.INFO

    setup_logging(level="Debug")
    assert logger.level == logging.DEBUG


def test_setup_logging_with_file(tmp_path: Path) -> None:
    """Test logging setup with file output."""
    log_file = tmp_path / "logs" / "train.log"
    setup_logging(level="INFO", log_file=log_file)

    assert log_file.parent.exists()

    logger = logging.getLogger("handheadkit.training.trainer")
    logger.info("epoch 1/1: total 0.5")

    assert log_file.exists()
    assert "epoch 1/1: total 0.5" in log_file.read_text()


def test_setup_logging_custom_format(tmp_path: Path) -> None:
    """Test logging setup with custom format string."""
    log_file = tmp_path / "test.log"
    setup_logging(level="INFO", log_file=log_file, format_string="%(levelname)s | %(message)s")

    logging.getLogger("test").info("Custom format test")

    assert "INFO | Custom format test" in log_file.read_text()


def test_setup_logging_routes_warnings(tmp_path: Path) -> None:
    """Test that warnings.warn output reaches the log file."""
    log_file = tmp_path / "warnings.log"
    setup_logging(level="WARNING", log_file=log_file)

    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.warn("recording too short", TooShortWarning)

    assert "recording too short" in log_file.read_text()


def test_setup_logging_multiple_handlers(tmp_path: Path) -> None:
    """Test that both console and file handlers are configured."""
    setup_logging(level="INFO", log_file=tmp_path / "test.log")
    handler_types = [type(h) for h in logging.getLogger().handlers]
    assert logging.StreamHandler in handler_types
    assert logging.FileHandler in handler_types


def test_setup_logging_again_reroutes_warnings(tmp_path: Path, monkeypatch) -> None:
    """Test that a second setup re-routes warnings after showwarning was replaced."""
    setup_logging(level="WARNING")
    monkeypatch.setattr(warnings, "showwarning", lambda *args, **kwargs: None)

    log_file = tmp_path / "again.log"
    setup_logging(level="WARNING", log_file=log_file)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        warnings.warn("second setup still routes", TooShortWarning)

    assert "second setup still routes" in log_file.read_text()
