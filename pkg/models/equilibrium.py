"""Pydantic models for equilibria and their linear classification."""
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class ReducedCubic(BaseModel):
    """Depressed form z^3 + p z + q of K x^3 - n x^2 + a m n x + m n = 0, x = z - theta/3."""

    model_config = ConfigDict(frozen=True)

    theta: float
    p1: float
    q1: float
    p: float
    q: float

    @property
    def scale(self) -> float:
        return max(abs(self.p / 3.0) ** 3, (self.q / 2.0) ** 2, 1e-300)


class EquilibriumKind(str, Enum):
    DISEASE_FREE = "disease_free"
    ENDEMIC = "endemic"


class Equilibrium(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., ge=0.0)
    y: float = Field(..., ge=0.0)
    multiplicity: int = Field(default=1, ge=1, le=3)
    kind: EquilibriumKind = EquilibriumKind.ENDEMIC


class EquilibriumTag(str, Enum):
    """Linear type of an equilibrium."""
    STABLE_NODE = "stable_node"
    STABLE_FOCUS = "stable_focus"
    UNSTABLE_NODE = "unstable_node"
    UNSTABLE_FOCUS = "unstable_focus"
    SADDLE = "saddle"
    SADDLE_NODE_ATTRACTING = "saddle_node_attracting"
    SADDLE_NODE_REPELLING = "saddle_node_repelling"
    WEAK_FOCUS_OR_CENTER = "weak_focus_or_center"
    DEGENERATE_BT = "degenerate_bt"


class EquilibriumClass(BaseModel):
    tag: EquilibriumTag
    trace: float
    det: float


class ClassifiedEquilibrium(BaseModel):
    """An equilibrium together with its classification (CLI/report row)."""
    equilibrium: Equilibrium
    classification: EquilibriumClass
