"""Settings — config.yaml + .env loading.

The YAML file holds numeric defaults; ``.env`` / process environment can
override the config path (``GENCAPUTO_CONFIG``) and the output directory
(``GENCAPUTO_OUTPUT_DIR``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any

import yaml
from dotenv import load_dotenv
from loguru import logger

from core.errors import ConfigError

_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = _ROOT / "config" / "config.yaml"

ENV_CONFIG = "GENCAPUTO_CONFIG"
ENV_OUTPUT_DIR = "GENCAPUTO_OUTPUT_DIR"


@dataclass(frozen=True)
class Settings:
    """Parsed configuration; ``raw`` is the YAML mapping as loaded."""

    raw: dict[str, Any] = field(default_factory=dict)
    config_path: Path = DEFAULT_CONFIG_PATH
    output_dir: Path = _ROOT / "data" / "output"

    def section(self, *keys: str) -> dict[str, Any]:
        """Nested lookup returning ``{}`` for missing sections."""
        node: Any = self.raw
        for key in keys:
            if not isinstance(node, dict):
                return {}
            node = node.get(key, {})
        return node if isinstance(node, dict) else {}


def load_settings(path: str | Path | None = None) -> Settings:
    """Read config.yaml (or *path*) and apply environment overrides."""
    load_dotenv()
    config_path = Path(path or os.environ.get(ENV_CONFIG, "") or DEFAULT_CONFIG_PATH)
    if not config_path.exists():
        raise ConfigError(f"config file not found: {config_path}")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {config_path}: {exc}") from exc

    out = os.environ.get(ENV_OUTPUT_DIR) or raw.get("output", {}).get("directory", "./data/output")
    output_dir = Path(out)
    if not output_dir.is_absolute():
        output_dir = (Path.cwd() / output_dir).resolve()

    logger.debug(f"Settings loaded from {config_path} (output_dir={output_dir})")
    return Settings(raw=raw, config_path=config_path, output_dir=output_dir)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings, loaded on first use."""
    return load_settings()
