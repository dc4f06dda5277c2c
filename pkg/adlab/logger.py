import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger()
logger.setLevel(os.getenv("ADLAB_LOG_LEVEL", "INFO").upper())


class _BelowWarning(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        return record.levelno < logging.WARNING


if not any(getattr(h, "_adlab", False) for h in logger.handlers):
    stdout_handler = logging.StreamHandler(sys.stdout)
    stderr_handler = logging.StreamHandler(sys.stderr)

    stdout_handler.setLevel(logging.DEBUG)    # INFO and below
    stdout_handler.addFilter(_BelowWarning())
    stderr_handler.setLevel(logging.WARNING)  # WARNING and above

    formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(message)s")
    stdout_handler.setFormatter(formatter)
    stderr_handler.setFormatter(formatter)

    for handler in (stdout_handler, stderr_handler):
        handler._adlab = True
        logger.addHandler(handler)
