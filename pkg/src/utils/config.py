"""
Environment-driven settings.

Values come from the process environment, optionally seeded from a `.env` file.
"""
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src.utils.errors import ConfigError

# Load environment variables
load_dotenv()

ENV_PREFIX = "ANALOGY_"


class Settings(BaseModel):
    max_arity: int = Field(4, ge=0, le=4)
    max_inv_arity: int = Field(4, ge=1, le=4)
    workers: int = Field(0, ge=0)
    solution_cap: int = Field(1 << 20, ge=1)
    registry: Optional[Path] = None
    cache_db: Optional[Path] = None
    log_dir: Optional[Path] = None
    log_level: str = "INFO"


def load_settings() -> Settings:
    """Read settings from ANALOGY_* variables."""
    raw = {}
    for name in Settings.model_fields:
        value = os.getenv(ENV_PREFIX + name.upper())
        if value is not None and value != "":
            raw[name] = value
    try:
        return Settings(**raw)
    except ValidationError as e:
        bad = ", ".join(ENV_PREFIX + str(err["loc"][0]).upper() for err in e.errors())
        raise ConfigError(f"Invalid environment setting: {bad}") from e


def enumeration_cap() -> int:
    return load_settings().max_arity
