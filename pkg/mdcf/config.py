"""mdcf.config
=================
Mini-README: Centralises configuration management using Pydantic settings. The module
defines strongly typed settings for certified-precision ceilings, expansion budgets,
oracle precision and the expected-table fixture directory. Every field can be
overridden through ``MDCF_``-prefixed environment variables or a ``.env`` file.
Usage: import ``get_settings()`` to retrieve a cached configuration instance.
"""

from functools import lru_cache
from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library configuration container leveraging environment variables."""

    model_config = SettingsConfigDict(env_prefix="MDCF_", env_file=".env", env_file_encoding="utf-8", extra="ignore")

    app_name: str = Field(default="mdcf")
    max_precision_bits: int = Field(default=65536, ge=64)
    initial_precision_bits: int = Field(default=64, ge=8)
    default_max_steps: int = Field(default=10000, ge=1)
    oracle_initial_bits: int = Field(default=128, ge=16)
    oracle_max_bits: int = Field(default=16384, ge=16)
    oracle_steps: int = Field(default=200, ge=1)
    fixtures_dir: Path | None = Field(default=None)
    log_level: str = Field(default="WARNING")


@lru_cache
def get_settings() -> Settings:
    """Return a cached instance of library settings."""

    return Settings()
