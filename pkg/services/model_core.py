"""
Parameters, nondimensionalisation, incidence diagnostics and the reduced
planar vector field

    dx/dt = x^3 (1 - c x - c y) / (1 + a x + b x^3) - m x
    dy/dt = x - n y
"""

import logging
import math
from typing import Sequence, Union

import numpy as np

from core.exceptions import ConstraintViolation, DenominatorNonpositive
from models.params import (
    DimensionalParams,
    DimensionalState,
    DimensionlessParams,
    Monotonicity,
    MonotonicityKind,
    State,
)

logger = logging.getLogger(__name__)

StateLike = Union[State, Sequence[float]]


def _xy(state: StateLike) -> tuple[float, float]:
    if isinstance(state, State):
        return state.x, state.y
    x, y = state
    return float(x), float(y)


# ============================================================================
# Validation and scaling
# ============================================================================

def a_lower_bound(b: float) -> float:
    """-3 (b/4)^(1/3): the denominator stays positive on x >= 0 iff a exceeds this."""
    return -3.0 * (b / 4.0) ** (1.0 / 3.0)


def validate(params: DimensionlessParams) -> DimensionlessParams:
    """Return ``params`` unchanged or raise ConstraintViolation naming the failed inequality."""
    for name in ("b", "c", "m", "n"):
        value = getattr(params, name)
        if not math.isfinite(value) or value <= 0.0:
            raise ConstraintViolation(f"{name} > 0 violated ({name}={value})", {name: value})
    if not math.isfinite(params.a):
        raise ConstraintViolation("a must be finite", {"a": params.a})
    bound = a_lower_bound(params.b)
    if params.a <= bound:
        raise ConstraintViolation(
            f"a > -3*(b/4)^(1/3) violated (a={params.a}, bound={bound})",
            {"a": params.a, "bound": bound},
        )
    return params


def validate_dimensional(params: DimensionalParams) -> DimensionalParams:
    for name in ("Lambda", "d", "mu", "delta", "kappa", "gamma"):
        value = getattr(params, name)
        if not math.isfinite(value) or value <= 0.0:
            raise ConstraintViolation(f"{name} > 0 violated ({name}={value})", {name: value})
    bound = -3.0 * (params.gamma / 4.0) ** (1.0 / 3.0)
    if params.beta <= bound:
        raise ConstraintViolation(
            f"beta > -3*(gamma/4)^(1/3) violated (beta={params.beta}, bound={bound})",
            {"beta": params.beta, "bound": bound},
        )
    return params


def scale_factor(params: DimensionalParams) -> float:
    """sigma = sqrt(d mu / (kappa Lambda)); I = sigma x, R = sigma y."""
    return math.sqrt(params.d * params.mu / (params.kappa * params.Lambda))


def nondimensionalize(params: DimensionalParams) -> DimensionlessParams:
    validate_dimensional(params)
    sigma = scale_factor(params)
    d, mu = params.d, params.mu
    result = DimensionlessParams(
        a=params.beta * sigma,
        b=d * mu * params.gamma / (params.kappa * params.Lambda) * sigma,
        c=d / params.Lambda * sigma,
        m=(d + mu) / mu,
        n=(d + params.delta) / mu,
    )
    return validate(result)


def to_dimensional_state(state: StateLike, params: DimensionalParams) -> DimensionalState:
    x, y = _xy(state)
    sigma = scale_factor(params)
    infected, recovered = sigma * x, sigma * y
    return DimensionalState(
        S=params.Lambda / params.d - infected - recovered, I=infected, R=recovered
    )


# ============================================================================
# Incidence function
# ============================================================================

def incidence(I: float, params: DimensionalParams) -> float:
    """kappa I^3 / (1 + beta I + gamma I^3)."""
    if I < 0:
        raise ConstraintViolation(f"I >= 0 violated (I={I})", {"I": I})
    denominator = 1.0 + params.beta * I + params.gamma * I**3
    return params.kappa * I**3 / denominator


def incidence_derivative(I: float, params: DimensionalParams) -> float:
    """g'(I) = kappa I^2 (3 + 2 beta I) / (1 + beta I + gamma I^3)^2."""
    denominator = 1.0 + params.beta * I + params.gamma * I**3
    return params.kappa * I**2 * (3.0 + 2.0 * params.beta * I) / denominator**2


def monotonicity_class(params: DimensionalParams) -> Monotonicity:
    if params.beta >= 0.0:
        return Monotonicity(kind=MonotonicityKind.INCREASING)
    return Monotonicity(
        kind=MonotonicityKind.INCREASING_DECREASING, extremum=-3.0 / (2.0 * params.beta)
    )


# ============================================================================
# Vector field
# ============================================================================

def denominator(x: float, params: DimensionlessParams) -> float:
    return 1.0 + params.a * x + params.b * x**3


def denominator_lower_bound(params: DimensionlessParams) -> float:
    """Infimum of 1 + a x + b x^3 over x >= 0."""
    if params.a >= 0.0:
        return 1.0
    return 1.0 + (2.0 * params.a / 3.0) * math.sqrt(-params.a / (3.0 * params.b))


def _checked_denominator(x: float, params: DimensionlessParams) -> float:
    D = denominator(x, params)
    if D <= 0.0:
        raise DenominatorNonpositive(
            f"1 + a x + b x^3 = {D} <= 0 at x={x}", {"x": x, "denominator": D}
        )
    return D


def vector_field(state: StateLike, params: DimensionlessParams) -> tuple[float, float]:
    x, y = _xy(state)
    D = _checked_denominator(x, params)
    dx = x**3 * (1.0 - params.c * x - params.c * y) / D - params.m * x
    dy = x - params.n * y
    return dx, dy


def jacobian(state: StateLike, params: DimensionlessParams) -> np.ndarray:
    x, y = _xy(state)
    a, b, c, m, n = params.as_tuple()
    D = _checked_denominator(x, params)
    numerator = x**3 * (1.0 - c * x - c * y)
    d_numerator = 3.0 * x**2 - 4.0 * c * x**3 - 3.0 * c * x**2 * y
    d_denominator = a + 3.0 * b * x**2
    j11 = (d_numerator * D - numerator * d_denominator) / D**2 - m
    j12 = -c * x**3 / D
    return np.array([[j11, j12], [1.0, -n]])


def equilibrium_j11(state: StateLike, params: DimensionlessParams) -> float:
    """J11 with the equilibrium relation substituted; equals jacobian()[0, 0] only at equilibria."""
    x, y = _xy(state)
    a, b, c, m, _ = params.as_tuple()
    D = _checked_denominator(x, params)
    return (
        -2.0 * a * m * x - 4.0 * (b * m + c) * x**3 - 3.0 * c * x**2 * y - m + 3.0 * x**2
    ) / D


def jacobian_det_numerator(state: StateLike, params: DimensionlessParams) -> float:
    """N(x, y) with det J = N / (1 + a x + b x^3) at positive equilibria."""
    x, y = _xy(state)
    a, b, c, m, n = params.as_tuple()
    return (
        n * (2.0 * a * m * x + 4.0 * (b * m + c) * x**3 + 3.0 * c * x**2 * y + m - 3.0 * x**2)
        + c * x**3
    )


def trapping_region_flux(params: DimensionlessParams, x_grid: Sequence[float]) -> np.ndarray:
    """d(x + y)/dt on the segment x + y = 1/c, x in ``x_grid``."""
    flux = []
    for x in x_grid:
        y = 1.0 / params.c - x
        dx, dy = vector_field((x, y), params)
        flux.append(dx + dy)
    return np.asarray(flux)
