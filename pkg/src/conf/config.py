from typing import Any

from pydantic import ConfigDict, field_validator
from pydantic_settings import BaseSettings

LOG_LEVELS = ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG")


class Settings(BaseSettings):
    SEED: int | None = None
    DELTA: float = 0.01
    DMAX: float = 5.5
    RELIABLE_LO: float = 1.0
    ALPHA: float = 0.05
    LEVEL: float = 0.95
    THREADS: int = 1
    OUT_DIR: str = "results"
    LOG_LEVEL: str = "INFO"
    LILLIEFORS_NMC: int = 1000
    KDE_GRID_POINTS: int = 512
    CLIP_LO: float = -0.5
    CLIP_HI: float = 5.5

    @field_validator("DELTA", "DMAX")
    @classmethod
    def validate_positive(cls, v: Any):
        if v <= 0:
            raise ValueError("bin size and maximum distance must be positive")
        return v

    @field_validator("ALPHA", "LEVEL")
    @classmethod
    def validate_probability(cls, v: Any):
        if not 0 < v < 1:
            raise ValueError("alpha and confidence level must lie in (0, 1)")
        return v

    @field_validator("THREADS", "LILLIEFORS_NMC", "KDE_GRID_POINTS")
    @classmethod
    def validate_count(cls, v: Any):
        if v < 1:
            raise ValueError("counts must be at least 1")
        return v

    @field_validator("SEED")
    @classmethod
    def validate_seed(cls, v: Any):
        if v is not None and v < 0:
            raise ValueError("seed must be non-negative")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: Any):
        level = str(v).upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {v!r}")
        return level

    model_config = ConfigDict(extra='ignore', env_prefix="CENSORMORPH_",
                              env_file=".env", env_file_encoding="utf-8")  # noqa


config = Settings()
