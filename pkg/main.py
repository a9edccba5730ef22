"""gencaputo — Entry point.

Startup sequence:
 1. Parse the command line (subcommand + global flags)
 2. Load config.yaml + .env
 3. Configure loguru sinks (stderr, optional rotating file)
 4. Dispatch the subcommand and exit with its code
"""

from __future__ import annotations

import sys
from pathlib import Path

from loguru import logger

from cli.commands import run
from core.settings import Settings


def setup_logging(settings: Settings, level: str | None = None) -> None:
    """stderr sink at the configured level; file sink when ``logging.file`` is on."""
    log_cfg = settings.section("logging")
    level = (level or log_cfg.get("level", "INFO")).upper()

    logger.remove()
    logger.add(sys.stderr, level=level)
    if log_cfg.get("file", False):
        log_path = Path(log_cfg.get("path", "data/logs/gencaputo.log"))
        log_path.parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(log_path),
            rotation=log_cfg.get("rotation", "10 MB"),
            retention=log_cfg.get("retention", "5 days"),
            level="DEBUG",
        )


def main() -> None:
    sys.exit(run(sys.argv[1:], configure_logging=setup_logging))


if __name__ == "__main__":
    main()
