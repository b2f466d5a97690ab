"""Application configuration loader."""

from __future__ import annotations

import importlib
import logging
from dotenv import load_dotenv
from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)
load_dotenv()

_LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseSettings):
    """Resource bounds and CLI defaults loaded from environment variables."""

    MAX_DEGREE: int = 10_000
    MAX_WREATH_DOMAIN: int = 10_000
    MAX_TREE_VERTICES: int = 250_000
    MAX_ENUMERATION: int = 200_000

    DEFAULT_DEPTH: int = 6
    DEFAULT_MARGIN: int = 2
    DEFAULT_BATTERY: int = 100
    DEFAULT_SEED: int = 0

    LOG_LEVEL: str = "INFO"
    ERROR_TRACKING_DSN: str | None = None

    @field_validator("MAX_DEGREE", "MAX_TREE_VERTICES")
    @classmethod
    def validate_at_least_two(cls, value: int) -> int:
        if value < 2:
            raise ValueError("bound must be at least 2")
        return value

    @field_validator("MAX_WREATH_DOMAIN")
    @classmethod
    def validate_wreath_domain(cls, value: int) -> int:
        if value < 4:
            raise ValueError("MAX_WREATH_DOMAIN must be at least 4")
        return value

    @field_validator("MAX_ENUMERATION", "DEFAULT_DEPTH", "DEFAULT_BATTERY")
    @classmethod
    def validate_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("value must be positive")
        return value

    @field_validator("DEFAULT_MARGIN")
    @classmethod
    def validate_margin(cls, value: int) -> int:
        if value < 0:
            raise ValueError("DEFAULT_MARGIN must not be negative")
        return value

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, value: str) -> str:
        level = value.upper()
        if level not in _LOG_LEVELS:
            logger.warning("Unknown log level %s, using INFO", value)
            return "INFO"
        return level

    model_config = SettingsConfigDict(
        case_sensitive=False,
        env_file=".env",
        validate_assignment=True,
        extra="ignore",
    )


try:
    settings = Settings()
except ValidationError as exc:  # pragma: no cover - fail fast on invalid config
    logging.error("Invalid configuration: %s", exc)
    raise

try:
    env_module = importlib.import_module("config_env")
except ModuleNotFoundError:
    logging.debug("config_env.py not found; using environment variables only")
else:
    overrides = {k: v for k, v in vars(env_module).items() if k.isupper()}
    if overrides:
        settings = Settings(**{**settings.model_dump(), **overrides})

MAX_DEGREE = settings.MAX_DEGREE
MAX_WREATH_DOMAIN = settings.MAX_WREATH_DOMAIN
MAX_TREE_VERTICES = settings.MAX_TREE_VERTICES
MAX_ENUMERATION = settings.MAX_ENUMERATION
DEFAULT_DEPTH = settings.DEFAULT_DEPTH
DEFAULT_MARGIN = settings.DEFAULT_MARGIN
DEFAULT_BATTERY = settings.DEFAULT_BATTERY
DEFAULT_SEED = settings.DEFAULT_SEED
LOG_LEVEL = settings.LOG_LEVEL
ERROR_TRACKING_DSN = settings.ERROR_TRACKING_DSN

__all__ = [
    "Settings",
    "settings",
    "MAX_DEGREE",
    "MAX_WREATH_DOMAIN",
    "MAX_TREE_VERTICES",
    "MAX_ENUMERATION",
    "DEFAULT_DEPTH",
    "DEFAULT_MARGIN",
    "DEFAULT_BATTERY",
    "DEFAULT_SEED",
    "LOG_LEVEL",
    "ERROR_TRACKING_DSN",
]
