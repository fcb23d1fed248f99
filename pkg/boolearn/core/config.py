"""Runtime settings read from the environment (and an optional .env file)."""

import logging
import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
CONTEST_BUDGET = 5000


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    """Process-wide settings."""

    threads: int = Field(1, ge=1, description="Worker cap for parallel training")
    budget: int = Field(CONTEST_BUDGET, ge=0, description="Default AND-node budget")
    log_level: str = Field("INFO", description="Root logging level")
    report_timing: bool = Field(False, description="Write wall_time into JSON reports")


@lru_cache
def get_settings() -> Settings:
    """Build settings from BOOLEARN_* environment variables."""
    return Settings(
        threads=int(os.getenv("BOOLEARN_THREADS", "1")),
        budget=int(os.getenv("BOOLEARN_BUDGET", str(CONTEST_BUDGET))),
        log_level=os.getenv("BOOLEARN_LOG_LEVEL", "INFO").upper(),
        report_timing=_env_flag("BOOLEARN_REPORT_TIMING"),
    )


def configure_logging(level: str | None = None) -> None:
    """Configure root logging once for an entry point."""
    logging.basicConfig(level=level or get_settings().log_level, format=LOG_FORMAT)
