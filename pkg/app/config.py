import logging
import os
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, Field

# loads .env automatically
load_dotenv()


class Settings(BaseModel):
    environment: str = os.getenv("ENVIRONMENT", "development")
    database_url: str = os.getenv("DATABASE_URL", "sqlite:///./engine_runs.db")
    depth: int = Field(default=int(os.getenv("ENGINE_DEPTH", "4")), ge=1)
    samples: int = Field(default=int(os.getenv("ENGINE_SAMPLES", "200")), ge=0)
    seed: int = int(os.getenv("ENGINE_SEED", "0"))
    set_bound: int = Field(default=int(os.getenv("ENGINE_SET_BOUND", "3")), ge=0)
    report: Literal["text", "json"] = os.getenv("ENGINE_REPORT", "text")
    log_level: str = os.getenv("ENGINE_LOG_LEVEL", "WARNING")


class RunConfig(BaseModel):
    """Per-invocation knobs; defaults come from the global settings."""

    command: str = "check"
    inputs: list[str] = Field(default_factory=list)
    depth: int = Field(default=4, ge=1)
    samples: int = Field(default=200, ge=0)
    seed: int = 0
    set_bound: int = Field(default=3, ge=0)
    report: Literal["text", "json"] = "text"
    out: str | None = None

    @classmethod
    def from_settings(cls, **overrides) -> "RunConfig":
        values = {
            "depth": settings.depth,
            "samples": settings.samples,
            "seed": settings.seed,
            "set_bound": settings.set_bound,
            "report": settings.report,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def configure_logging(level: str | None = None) -> None:
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


# global settings instance
settings = Settings()
