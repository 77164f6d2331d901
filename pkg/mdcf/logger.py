"""mdcf.logger
=================
Mini-README: Configures structured logging utilities across the library. Exposes a
factory for obtaining module-specific loggers with consistent formatting, and a
``configure_logging`` hook the command-line entry point calls once at start-up so
importing the library never reconfigures the host application's logging.
"""

import logging
from logging.config import dictConfig

_LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "default": {
            "format": "%(asctime)s | %(levelname)s | %(name)s | %(message)s",
        }
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "default",
            "level": "DEBUG",
            "stream": "ext://sys.stderr",
        }
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
}


def configure_logging(level: str = "WARNING") -> None:
    """Install the console handler with the requested root level."""

    config = dict(_LOGGING_CONFIG)
    config["root"] = {**_LOGGING_CONFIG["root"], "level": level.upper()}
    dictConfig(config)


def get_logger(name: str) -> logging.Logger:
    """Return a module-specific logger instance."""

    return logging.getLogger(name)
