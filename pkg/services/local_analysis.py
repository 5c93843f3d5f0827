"""
Linear classification of equilibria, Hopf conditions and cycle
nonexistence/existence predicates.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from core.config import get_tolerances
from core.exceptions import NoPositiveEquilibria
from models.equilibrium import (
    ClassifiedEquilibrium,
    Equilibrium,
    EquilibriumClass,
    EquilibriumTag,
)
from models.params import DimensionlessParams
from services import equilibria as eq_service
from services.model_core import denominator, jacobian

logger = logging.getLogger(__name__)


def classify(
    eq: Equilibrium, params: DimensionlessParams, tol: Optional[float] = None
) -> EquilibriumClass:
    """
    Tag an equilibrium from the trace and determinant of its Jacobian.

    Both are scaled by the Frobenius norm before the degeneracy tests, so
    ``tol`` is relative.  Double equilibria are saddle-nodes whose direction
    follows the sign of the trace.
    """
    tol = get_tolerances().CLASSIFY_TOL if tol is None else tol
    J = jacobian((eq.x, eq.y), params)
    trace = float(np.trace(J))
    det = float(np.linalg.det(J))
    norm = float(np.linalg.norm(J))
    trace_s, det_s = trace / norm, det / norm**2

    if abs(trace_s) < tol and abs(det_s) < tol:
        tag = EquilibriumTag.DEGENERATE_BT
    elif eq.multiplicity >= 2 or abs(det_s) < tol:
        tag = (
            EquilibriumTag.SADDLE_NODE_REPELLING
            if trace > 0
            else EquilibriumTag.SADDLE_NODE_ATTRACTING
        )
    elif det < 0:
        tag = EquilibriumTag.SADDLE
    elif abs(trace_s) < tol:
        tag = EquilibriumTag.WEAK_FOCUS_OR_CENTER
    else:
        is_node = trace**2 - 4.0 * det >= 0.0
        if trace < 0:
            tag = EquilibriumTag.STABLE_NODE if is_node else EquilibriumTag.STABLE_FOCUS
        else:
            tag = EquilibriumTag.UNSTABLE_NODE if is_node else EquilibriumTag.UNSTABLE_FOCUS
    return EquilibriumClass(tag=tag, trace=trace, det=det)


def classify_all(
    params: DimensionlessParams,
    zero_tol: Optional[float] = None,
    tol: Optional[float] = None,
) -> list[ClassifiedEquilibrium]:
    return [
        ClassifiedEquilibrium(equilibrium=e, classification=classify(e, params, tol))
        for e in eq_service.solve_equilibria(params, zero_tol)
    ]


def upper_equilibrium(
    params: DimensionlessParams, zero_tol: Optional[float] = None
) -> Optional[Equilibrium]:
    """E2, the larger of two positive equilibria (None unless there are exactly two)."""
    positives = eq_service.positive_equilibria(params, zero_tol)
    if len(positives) != 2:
        return None
    return positives[-1]


# ============================================================================
# Hopf conditions
# ============================================================================

def hopf_residuals(params: DimensionlessParams, x2: float) -> tuple[float, float]:
    """(trace residual, transversality) at the upper equilibrium x2."""
    a, b, c, m, n = params.as_tuple()
    trace_residual = 2.0 * m - n + a * (m - n) * x2 - (c + b * m + b * n) * x2**3
    transversality = n * (2.0 * a * x2 + 3.0) - 2.0 * m * (a * x2 + 3.0)
    return trace_residual, transversality


def lienard_p(x: float, params: DimensionlessParams) -> float:
    """p(x) = c x^3 / (1 + a x + b x^3)."""
    return params.c * x**3 / denominator(x, params)


def lienard_g_prime(x: float, params: DimensionlessParams) -> float:
    """G'(x) for G(x) = 1/c - x - m (1 + a x + b x^3) / (c x^2)."""
    a, b, c, m, _ = params.as_tuple()
    return (-c * x**3 + m * (a * x - b * x**3 + 2.0)) / (c * x**3)


def dulac_margin(x: float, params: DimensionlessParams) -> float:
    """G'(x) - n / p(x); positive everywhere on the region rules out cycles."""
    return lienard_g_prime(x, params) - params.n / lienard_p(x, params)


def dulac_no_cycles(
    params: DimensionlessParams,
    x_grid: Optional[Sequence[float]] = None,
    strict: bool = False,
) -> bool:
    """
    Sufficient Dulac check on [delta1, 1/c] with delta1 half the smallest positive x.

    Returns False (inconclusive) as soon as the margin is non-positive anywhere.
    Without positive equilibria there are no cycles at all; ``strict`` turns
    that case into NoPositiveEquilibria instead of a trivial True.
    """
    tolerances = get_tolerances()
    positives = eq_service.positive_equilibria(params)
    if not positives:
        if strict:
            raise NoPositiveEquilibria("no positive equilibria; cycles are precluded")
        logger.info("No positive equilibria; reporting no cycles")
        return True

    if x_grid is None:
        delta1 = 0.5 * positives[0].x
        x_grid = np.linspace(delta1, 1.0 / params.c, tolerances.DULAC_GRID)
    x_grid = np.asarray(x_grid, dtype=float)

    margins = np.array([dulac_margin(x, params) for x in x_grid])
    if np.any(margins <= 0.0):
        return False

    # Refine around near-zero margins before claiming positivity
    step = float(np.min(np.diff(x_grid))) if x_grid.size > 1 else 0.0
    for x in x_grid[margins < tolerances.DULAC_MARGIN]:
        fine = np.linspace(max(x - step, x_grid[0]), min(x + step, x_grid[-1]), 33)
        if any(dulac_margin(s, params) <= 0.0 for s in fine):
            return False
    return True


def exists_stable_cycle_predicate(params: DimensionlessParams) -> bool:
    """Two positive equilibria with E2 repelling: a stable cycle must surround E2."""
    if eq_service.discriminant(params) >= 0.0:
        return False
    e2 = upper_equilibrium(params)
    if e2 is None:
        return False
    return classify(e2, params).trace > 0.0
