"""Logging configuration."""
import logging


def configure_logging(level: str | int = logging.INFO):
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

