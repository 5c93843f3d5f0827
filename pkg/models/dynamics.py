"""Pydantic models for trajectories and limit cycles."""
from enum import Enum

from pydantic import BaseModel, Field


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> float:
        return 1.0 if self is Direction.FORWARD else -1.0


class CycleStability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    SEMI_STABLE = "semi_stable"


class IntegratorStats(BaseModel):
    steps: int = 0
    rejected_steps: int = 0
    function_evals: int = 0
    final_error_estimate: float = 0.0


class Trajectory(BaseModel):
    t: list[float]
    x: list[float]
    y: list[float]
    stats: IntegratorStats = Field(default_factory=IntegratorStats)

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t, self.x, self.y))


class ReturnResult(BaseModel):
    x1: float
    period: float


class LimitCycle(BaseModel):
    """A periodic orbit anchored on the section {y = y2, x > x2}."""

    x0: float
    period: float = Field(..., gt=0.0)
    stability: CycleStability
    slope: float  # derivative of the forward return map at x0
    residual: float  # |P(x0) - x0|
    direction_found: Direction
    side_displacements: list[float] = Field(default_factory=list)  # inner, outer; set when slope ~ 1
    loop_x: list[float] = Field(default_factory=list)
    loop_y: list[float] = Field(default_factory=list)


class PhasePortrait(BaseModel):
    starts: list[tuple[float, float]]
    trajectories: list[Trajectory]


class OriginAttraction(BaseModel):
    """Forward runs from starts in the trapping region toward the disease-free state."""

    t_end: float
    tol: float
    starts: list[tuple[float, float]]
    final_norms: list[float]
    converged: bool
