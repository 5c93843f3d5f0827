"""Pydantic models for focal values."""
from enum import Enum

from pydantic import BaseModel, Field

from models.params import DimensionlessParams


class FocusStability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    UNDETERMINED = "undetermined"


class FocusReport(BaseModel):
    """
    Focal values at the larger positive equilibrium.

    ``coefficients`` holds the Taylor coefficients B_1..B_8 of F(theta(x)) - F(x);
    the named fields B1..B7 are derivatives of the same series at 0 (k! times the
    coefficient), the normalisation in which published values are quoted.
    """

    x2: float
    h: list[float] = Field(..., description="h2..h7")
    nu: list[float] = Field(..., description="nu2..nu6")
    coefficients: list[float] = Field(..., description="B_1..B_8 Taylor coefficients")
    B1: float
    B3: float
    B5: float
    B7: float
    even: list[float] = Field(..., description="B2, B4, B6, B8 from the recurrences")
    order: int = Field(..., ge=0, le=3)
    stability: FocusStability

    @property
    def h2(self) -> float:
        return self.h[0]

    @property
    def nu2(self) -> float:
        return self.nu[0]


class CodimJacobian(BaseModel):
    parameters: list[str]
    focal_indices: list[int]
    matrix: list[list[float]]
    determinant: float


class FocalUnfolding(BaseModel):
    """Parameter point whose focal values were steered onto ``targets``."""

    params: DimensionlessParams
    parameters: list[str]
    focal_indices: list[int]
    targets: list[float]
    values: list[float]
    residual: float
