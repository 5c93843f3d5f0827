"""
Error hierarchy for Bifurcato.

Every domain error derives from BifurcatoError and carries a stable ``code``
(the name reported by the CLI) plus an optional ``details`` mapping with the
offending values.
"""

from typing import Any, Optional


class BifurcatoError(Exception):
    """Base class for all domain errors."""

    code: str = "BifurcatoError"

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


# model_core

class ConstraintViolation(BifurcatoError):
    """A parameter invariant does not hold."""

    code = "ConstraintViolation"


class DenominatorNonpositive(BifurcatoError):
    """1 + a x + b x^3 <= 0 at the evaluation point."""

    code = "DenominatorNonpositive"


# equilibria

class NotARoot(BifurcatoError):
    code = "NotARoot"


# local_analysis

class NoPositiveEquilibria(BifurcatoError):
    code = "NoPositiveEquilibria"


# critical_loci

class ConditionFailed(BifurcatoError):
    """A closed-form critical locus has no admissible (positive) solution."""

    code = "ConditionFailed"


class ComplexRoots(BifurcatoError):
    code = "ComplexRoots"


class DegenerateDenominator(BifurcatoError):
    code = "DegenerateDenominator"


class EtaNotZero(BifurcatoError):
    code = "EtaNotZero"


# unfolding

class ZetaEtaZero(BifurcatoError):
    code = "ZetaEtaZero"


class NoRootInBracket(BifurcatoError):
    code = "NoRootInBracket"


class DegenerateUnfolding(BifurcatoError):
    code = "DegenerateUnfolding"


# focus_quantities

class H2Zero(BifurcatoError):
    code = "H2Zero"


class EquilibriumLost(BifurcatoError):
    """A perturbed parameter point no longer has two positive equilibria."""

    code = "EquilibriumLost"


# dynamics

class StepSizeUnderflow(BifurcatoError):
    code = "StepSizeUnderflow"


class NonFiniteState(BifurcatoError):
    code = "NonFiniteState"


class NoReturn(BifurcatoError):
    """Trajectory left the trapping region or exhausted its time budget."""

    code = "NoReturn"


class ConvergedToEquilibrium(BifurcatoError):
    code = "ConvergedToEquilibrium"


# cli_io

class IoError(BifurcatoError):
    code = "IoError"
