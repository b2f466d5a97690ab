"""Command-line entry point with logging and error tracking configured."""

from __future__ import annotations

import logging
import sys

import sentry_sdk

from config import ERROR_TRACKING_DSN, LOG_LEVEL
from src.core.services.system_utilities import cli_main, job_id_var

logger = logging.getLogger(__name__)

APP_VERSION = "0.1.0"


class JobIdFilter(logging.Filter):
    """Add the job id of the current invocation to log records."""

    def filter(self, record: logging.LogRecord) -> bool:  # type: ignore[override]
        record.job_id = job_id_var.get()
        return True


def configure_logging(level: str = LOG_LEVEL) -> None:
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(job_id)s - %(name)s - %(message)s",
    )
    for handler in logging.getLogger().handlers:
        if not any(isinstance(f, JobIdFilter) for f in handler.filters):
            handler.addFilter(JobIdFilter())

    if ERROR_TRACKING_DSN:
        sentry_sdk.init(dsn=ERROR_TRACKING_DSN, release=f"box-product@{APP_VERSION}")
        logger.info("Sentry error tracking enabled")


def main(argv: list[str] | None = None) -> int:
    configure_logging()
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
