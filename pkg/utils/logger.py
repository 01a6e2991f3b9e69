import logging
import sys
from typing import Optional

import config


class ColorFormatter(logging.Formatter):
    """Colour formatter for the console"""

    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[32m',       # Green
        'WARNING': '\033[33m',    # Yellow
        'ERROR': '\033[31m',      # Red
        'CRITICAL': '\033[1;31m', # Bold Red
    }

    RESET = '\033[0m'

    def format(self, record):
        levelname = record.levelname
        if levelname in self.COLORS:
            levelname = f"{self.COLORS[levelname]}{levelname}{self.RESET}"

        asctime = self.formatTime(record, self.datefmt)
        message = f"{asctime} | {record.name} | {levelname} | {record.getMessage()}"
        if record.exc_info:
            message += "\n" + self.formatException(record.exc_info)
        return message


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> logging.Logger:
    """
    Configure the root logger once for the CLI

    Args:
        level: Console level name, defaults to COVERAGE_LOG_LEVEL
        log_file: File for DEBUG output, defaults to COVERAGE_LOG_FILE; empty disables it

    Returns:
        The application logger
    """
    settings = config.LOGGING_SETTINGS
    level = (level or settings['level']).upper()
    log_file = settings['file'] if log_file is None else log_file

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)
    root_logger.handlers.clear()

    console_formatter = ColorFormatter(
        fmt='%(asctime)s | %(name)-20s | %(levelname)-8s | %(message)s',
        datefmt='%H:%M:%S'
    )
    file_formatter = logging.Formatter(
        fmt='%(asctime)s | %(name)-20s | %(levelname)-8s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # stderr keeps stdout clean for solve/validate-config documents
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, level, logging.INFO))
    console_handler.setFormatter(console_formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        try:
            file_handler = logging.FileHandler(log_file, encoding='utf-8', mode='a')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(file_formatter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            root_logger.warning(f"⚠️ Could not open log file {log_file}: {e}")

    for noisy in ('matplotlib', 'numba', 'asyncio'):
        logging.getLogger(noisy).setLevel(logging.WARNING)

    app_logger = logging.getLogger('fdbackhaul')
    app_logger.debug("📝 Logging configured")
    return app_logger
