import logging
import os

__all__ = ['LOGGER_NAME', 'LEVELS', 'LOG_LEVEL_ENV', 'set_logging_level']

LOGGER_NAME = 'casimir_sdk'
LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
# Overrides the WARNING default at import time, e.g. CASIMIR_SDK_LOG_LEVEL=debug
LOG_LEVEL_ENV = 'CASIMIR_SDK_LOG_LEVEL'


def _configure_logger():
    """
    Attach the console handler to the root logger and set the package level from the environment.
    """
    logging.basicConfig(level=logging.WARNING,
                        format='[%(asctime)s] %(levelname)s [%(name)s.%(funcName)s:%(lineno)d] %(message)s',
                        datefmt='%Y-%m-%d %H:%M:%S')
    try:
        set_logging_level(os.environ.get(LOG_LEVEL_ENV) or 'WARNING')
    except ValueError as e:
        set_logging_level(logging.WARNING)
        logging.getLogger(LOGGER_NAME).warning(f'{e}, ignoring {LOG_LEVEL_ENV}')


def set_logging_level(level) -> int:
    """
    Set the level of the casimir_sdk loggers. Other libraries logging through the root logger are left alone.

    Args:
        level: A logging constant or one of LEVELS, case-insensitive.

    Returns:
        The numeric level now in effect.

    Raises:
        ValueError: Unknown level name.
    """
    if isinstance(level, str):
        name = level.strip().upper()
        if name not in LEVELS:
            raise ValueError(f"Unknown log level '{level}', expected one of {', '.join(LEVELS)}")
        level = getattr(logging, name)
    logging.getLogger(LOGGER_NAME).setLevel(level)
    return level


_configure_logger()
