import logging
import os
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Runtime settings read from the environment (or a .env file)"""

    det_size_cap: int = Field(default=8, ge=1)
    seed: int = Field(default=0, ge=0)
    trials: int = Field(default=100, ge=1)
    max_resamples: int = Field(default=5, ge=0)
    log_level: str = "WARNING"
    port: int = Field(default=8000, ge=1, le=65535)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        det_size_cap=os.getenv("PINV_DET_SIZE_CAP", "8"),
        seed=os.getenv("PINV_SEED", "0"),
        trials=os.getenv("PINV_TRIALS", "100"),
        max_resamples=os.getenv("PINV_MAX_RESAMPLES", "5"),
        log_level=os.getenv("PINV_LOG_LEVEL", "WARNING"),
        port=os.getenv("PORT", "8000"),
    )


def configure_logging(level: Optional[str] = None) -> None:
    """Configure the root logger once; records go to stderr"""
    logging.basicConfig(
        level=level or get_settings().log_level,
        format="%(levelname)s %(name)s: %(message)s",
    )
