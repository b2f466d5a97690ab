"""Entry point shim: ``python -m src.core.services.cli``."""

import sys

from .system_utilities import build_report, cli_main

__all__ = ["build_report", "cli_main"]

if __name__ == "__main__":
    sys.exit(cli_main())
