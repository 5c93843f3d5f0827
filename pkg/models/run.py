"""Run configuration for CLI commands and the repro pipeline."""
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator

from models.params import DimensionalParams, DimensionlessParams


class ReproCase(str, Enum):
    GLOBAL = "global"
    FIG5A = "fig5a"
    FIG5B = "fig5b"
    FIG7A = "fig7a"
    FIG7B = "fig7b"
    FIG8 = "fig8"
    EX51 = "ex51"
    EX52 = "ex52"
    HOPF_REGIONS = "hopf_regions"


class RunStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class RunConfig(BaseModel):
    """Exactly one of ``dimensional``/``dimensionless`` is set."""

    dimensional: Optional[DimensionalParams] = None
    dimensionless: Optional[DimensionlessParams] = None
    options: dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _one_parameter_set(self) -> "RunConfig":
        if (self.dimensional is None) == (self.dimensionless is None):
            raise ValueError("exactly one of dimensional/dimensionless must be given")
        for key, value in self.options.items():
            if key.endswith("tol") and isinstance(value, (int, float)) and value <= 0:
                raise ValueError(f"tolerance {key} must be > 0")
        return self


class ReproState(BaseModel):
    """
    The state object that flows through the repro pipeline.
    Each node adds its section to ``results``.
    """
    case: ReproCase
    params: DimensionlessParams
    run_id: str = ""
    status: RunStatus = RunStatus.PENDING
    results: dict[str, Any] = Field(default_factory=dict)
    errors: list[str] = Field(default_factory=list)
    start_time: Optional[datetime] = None
    end_time: Optional[datetime] = None
    execution_metrics: dict[str, Any] = Field(default_factory=dict)

    def stamp_start(self) -> None:
        self.start_time = datetime.now(timezone.utc)
        self.status = RunStatus.RUNNING
