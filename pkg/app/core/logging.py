"""
Logging configuration for the active learning benchmark
"""

import logging
import sys
import json
from datetime import datetime, timezone
from typing import Optional

from app.core.config import settings

# Structured fields copied from `extra=` into JSON log lines
STRUCTURED_FIELDS = (
    "strategy",
    "seed",
    "cycle",
    "labeled_count",
    "metric",
    "batch_size",
    "elapsed_sec",
    "mode",
    "path",
)


class JSONFormatter(logging.Formatter):
    """JSON log formatter"""

    def format(self, record: logging.LogRecord) -> str:
        log_entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        for field in STRUCTURED_FIELDS:
            if hasattr(record, field):
                log_entry[field] = getattr(record, field)

        # Add exception info if present
        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry)


class PlainFormatter(logging.Formatter):
    """Plain text log formatter"""

    def __init__(self):
        super().__init__(
            fmt="[%(asctime)s] %(levelname)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        )


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None):
    """Setup application logging; arguments override the settings"""
    level = (level or settings.LOG_LEVEL).upper()
    log_format = (log_format or settings.LOG_FORMAT).lower()

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, level, logging.INFO))

    # Remove existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stdout)

    if log_format == "json":
        formatter = JSONFormatter()
    else:
        formatter = PlainFormatter()

    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    # Set specific logger levels
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    logging.getLogger("PIL").setLevel(logging.WARNING)


def log_cycle(logger: logging.Logger, record, strategy: str, seed: int, mode: str = "standard"):
    """Log a completed active learning cycle with structured data"""
    extra = {
        "strategy": strategy,
        "seed": seed,
        "cycle": record.cycle,
        "labeled_count": record.labeled_count,
        "metric": round(record.metric_value, 6),
        "batch_size": len(record.queried_indices),
        "mode": mode,
    }

    logger.info("Cycle completed", extra=extra)
