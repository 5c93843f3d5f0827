"""Pydantic models for critical parameter loci and normal-form coefficients."""
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict


class CriticalRegime(str, Enum):
    CODIM2 = "codim2"
    CODIM3 = "codim3"


class CriticalPoint(BaseModel):
    """A Bogdanov-Takens point (x*, y*) reached at (c*, n*[, b*])."""

    model_config = ConfigDict(frozen=True)

    x_star: float
    y_star: float
    n_star: float
    c_star: float
    b_star: Optional[float] = None
    regime: CriticalRegime = CriticalRegime.CODIM2


class NormalFormCoeffs(BaseModel):
    """Taylor coefficients xi1..xi8 of the vector field at the double equilibrium."""

    model_config = ConfigDict(frozen=True)

    xi1: float
    xi2: float
    xi3: float
    xi4: float
    xi5: Optional[float] = None
    xi6: Optional[float] = None
    xi7: Optional[float] = None
    xi8: Optional[float] = None
    zeta: float
    eta: float
    chi: Optional[float] = None

    @property
    def xi(self) -> list[Optional[float]]:
        return [self.xi1, self.xi2, self.xi3, self.xi4, self.xi5, self.xi6, self.xi7, self.xi8]


class EradicationCase(str, Enum):
    """Position of the gamma thresholds relative to zero."""
    BOTH_NEGATIVE = "both_negative"  # gamma1 < gamma2 < 0
    STRADDLING = "straddling"  # gamma1 < 0 < gamma2
    BOTH_POSITIVE = "both_positive"  # 0 < gamma1 < gamma2


class GammaThresholds(BaseModel):
    b1: float
    b2: float
    gamma1: float
    gamma2: float
    case: EradicationCase
    # Open intervals of gamma on which the disease dies out
    eradication_ranges: list[tuple[float, float]]
