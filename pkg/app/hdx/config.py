"""Runtime settings for the HDX toolkit (env prefix HDX_, optional .env file)."""
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="HDX_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # ===== STORAGE =====
    cache_dir: Optional[Path] = None

    # ===== DESK SCALE =====
    max_faces: int = Field(default=2_000_000, gt=0)
    dense_threshold: int = Field(default=40_000, gt=0)

    # ===== TOLERANCES =====
    identity_tol: float = 1e-12
    walk_tol: float = 1e-9
    zero_tol: float = 1e-10
    nullspace_rcond: float = 1e-10
    singular_condition_limit: float = 1e12
    sum_tol: float = 1e-12

    # ===== LOGGING =====
    log_level: str = "INFO"
    json_logs: bool = False

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {value}")
        return value


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings instance."""
    return Settings()


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment."""
    get_settings.cache_clear()
