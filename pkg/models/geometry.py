"""Pydantic models for unfolding jets, curves, surfaces and front points."""
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field

from models.dynamics import CycleStability


class CurveLabel(str, Enum):
    SN_PLUS = "SN+"
    SN_MINUS = "SN-"
    HOPF = "Hopf"
    HOMOCLINIC = "Homoclinic"
    SNLC = "SNlc"
    TANGENCY_HOM = "TangencyHom"
    TANGENCY_HOPF = "TangencyHopf"
    CUSP_CURVE = "CuspCurve"
    C = "C"
    # Surfaces
    HOPF_SURFACE = "HopfSurface"
    HOMOCLINIC_SURFACE = "HomoclinicSurface"
    SNLC_PRINTED = "SNlcPrinted"
    H_PLUS = "H+"
    H_MINUS = "H-"
    BS = "BS"
    SWALLOWTAIL = "Swallowtail"


class CurveSample(BaseModel):
    """Labelled point cloud; surfaces also carry a triangulation."""

    label: CurveLabel
    points: list[tuple[float, ...]] = Field(default_factory=list)
    parameterization: str = ""
    triangles: Optional[list[tuple[int, int, int]]] = None
    metadata: dict[str, Any] = Field(default_factory=dict)
    skipped: list[float] = Field(default_factory=list)  # grid values with no root

    @property
    def dimension(self) -> int:
        return len(self.points[0]) if self.points else 0


class BT2Jet(BaseModel):
    """2-jets of mu1, mu2 in (eps1, eps2) = (c - c*, n - n*)."""

    r: list[float] = Field(..., min_length=5, max_length=5)  # r1..r5
    s: list[float] = Field(..., min_length=5, max_length=5)  # s1..s5
    upsilon: float
    zeta: float
    eta: float

    def mu1(self, e1: float, e2: float) -> float:
        r1, r2, r3, r4, r5 = self.r
        return r1 * e1 + r2 * e2 + r3 * e1 * e1 + r4 * e1 * e2 + r5 * e2 * e2

    def mu2(self, e1: float, e2: float) -> float:
        s1, s2, s3, s4, s5 = self.s
        return s1 * e1 + s2 * e2 + s3 * e1 * e1 + s4 * e1 * e2 + s5 * e2 * e2

    @property
    def linear_determinant(self) -> float:
        return self.r[0] * self.s[1] - self.r[1] * self.s[0]


class BT3Transversality(BaseModel):
    nondegeneracy: float
    determinant: float  # closed-form determinant with |varsigma|^(4/5)
    matrix_determinant: float  # determinant of the reduction-chain Jacobian
    varsigma: float
    signs_agree: bool
    matrix: list[list[float]]  # d(mu1, mu2, mu3)/d(eps1, eps2, eps3)
    unscaled_rows: list[list[float]] = Field(default_factory=list)  # d(nu00, nu01, nu11)/d(eps)


class FrontClass(str, Enum):
    REGULAR = "regular"
    CUSPIDAL_EDGE = "cuspidal_edge"
    SWALLOWTAIL = "swallowtail"


class FrontPoint(BaseModel):
    r: float
    mu3: float
    image: tuple[float, float, float]
    classification: FrontClass


class NormalFormCycle(BaseModel):
    radius: float
    stability: CycleStability


class NormalFormPortrait(BaseModel):
    """Cycles of dr/dt = mu1 r + mu2 r^3 + mu3 r^5 - r^7, innermost first."""

    mu: tuple[float, float, float]
    origin_stable: bool
    cycles: list[NormalFormCycle] = Field(default_factory=list)
    hopf: Optional[CurveLabel] = None

    @property
    def stability(self) -> list[CycleStability]:
        return [c.stability for c in self.cycles]
