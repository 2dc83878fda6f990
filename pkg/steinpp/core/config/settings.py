"""
Process-level settings read from the environment (STEINPP_*) and .env.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SteinppSettings(BaseSettings):
    """Runtime knobs that never change results, except chunk_size."""

    model_config = SettingsConfigDict(env_prefix="STEINPP_", env_file=".env", extra="ignore")

    threads: int = Field(default=1, ge=1)
    log_level: str = Field(default="WARNING")
    # Replicates per random stream; results depend on it, thread count does not.
    chunk_size: int = Field(default=4096, ge=1)


def get_settings() -> SteinppSettings:
    return SteinppSettings()
