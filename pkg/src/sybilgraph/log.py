"""Logging helpers shared by every sybilgraph module."""

import logging

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
ROOT_LOGGER = "sybilgraph"


def get_logger(name: str) -> logging.Logger:
    """Return the module logger for ``name``."""
    return logging.getLogger(name)


def reset_logging() -> None:
    """Detach and close every handler installed on the ``sybilgraph`` logger."""
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)


def setup_logging(level: str | int = "INFO") -> None:
    """
    Install a single stream handler on the ``sybilgraph`` logger.

    Repeated calls replace the handler, so the logger never holds more than
    one.

    Parameters
    ----------
    level : str | int, optional
        Logging level name or number. Default is "INFO".
    """
    reset_logging()
    logger = logging.getLogger(ROOT_LOGGER)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    logger.setLevel(level.upper() if isinstance(level, str) else level)
