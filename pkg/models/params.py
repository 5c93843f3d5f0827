"""Pydantic models for model parameters and planar states."""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class DimensionalParams(BaseModel):
    """Rates of the three-compartment SIRS model with cubic saturated incidence."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    Lambda: float = Field(..., description="recruitment rate")
    d: float = Field(..., description="natural death rate")
    mu: float = Field(..., description="recovery rate")
    delta: float = Field(..., description="immunity-loss rate")
    kappa: float = Field(..., description="infection rate")
    beta: float = Field(..., description="linear saturation coefficient")
    gamma: float = Field(..., description="psychological inhibition")


class DimensionlessParams(BaseModel):
    """The five controls (a, b, c, m, n) of the reduced planar system."""

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    c: float
    m: float
    n: float

    def replace(self, **changes: float) -> "DimensionlessParams":
        return self.model_copy(update=changes)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.m, self.n)


class State(BaseModel):
    """Scaled infected x and recovered y."""

    model_config = ConfigDict(frozen=True)

    x: float
    y: float


class DimensionalState(BaseModel):
    model_config = ConfigDict(frozen=True)

    S: float
    I: float
    R: float


class MonotonicityKind(str, Enum):
    """Shape of the incidence function on I >= 0."""
    INCREASING = "increasing"
    INCREASING_DECREASING = "increasing_decreasing"


class Monotonicity(BaseModel):
    kind: MonotonicityKind
    extremum: Optional[float] = None  # I at which g'(I) changes sign
