# models package
from models.params import (
    DimensionalParams,
    DimensionlessParams,
    DimensionalState,
    Monotonicity,
    MonotonicityKind,
    State,
)
from models.equilibrium import (
    ClassifiedEquilibrium,
    Equilibrium,
    EquilibriumClass,
    EquilibriumKind,
    EquilibriumTag,
    ReducedCubic,
)
from models.critical import (
    CriticalPoint,
    CriticalRegime,
    EradicationCase,
    GammaThresholds,
    NormalFormCoeffs,
)
from models.focus import CodimJacobian, FocalUnfolding, FocusReport, FocusStability
from models.dynamics import (
    CycleStability,
    Direction,
    IntegratorStats,
    LimitCycle,
    OriginAttraction,
    PhasePortrait,
    ReturnResult,
    Trajectory,
)
from models.geometry import (
    BT2Jet,
    BT3Transversality,
    CurveLabel,
    CurveSample,
    FrontClass,
    FrontPoint,
    NormalFormCycle,
    NormalFormPortrait,
)
from models.run import ReproCase, ReproState, RunConfig, RunStatus

__all__ = [
    "DimensionalParams",
    "DimensionlessParams",
    "DimensionalState",
    "Monotonicity",
    "MonotonicityKind",
    "State",
    "ClassifiedEquilibrium",
    "Equilibrium",
    "EquilibriumClass",
    "EquilibriumKind",
    "EquilibriumTag",
    "ReducedCubic",
    "CriticalPoint",
    "CriticalRegime",
    "EradicationCase",
    "GammaThresholds",
    "NormalFormCoeffs",
    "CodimJacobian",
    "FocalUnfolding",
    "FocusReport",
    "FocusStability",
    "CycleStability",
    "Direction",
    "IntegratorStats",
    "LimitCycle",
    "OriginAttraction",
    "PhasePortrait",
    "ReturnResult",
    "Trajectory",
    "BT2Jet",
    "BT3Transversality",
    "CurveLabel",
    "CurveSample",
    "FrontClass",
    "FrontPoint",
    "NormalFormCycle",
    "NormalFormPortrait",
    "ReproCase",
    "ReproState",
    "RunConfig",
    "RunStatus",
]
