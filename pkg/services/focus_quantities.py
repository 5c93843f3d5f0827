"""
Focal values of the upper equilibrium E2 by the Lienard reduction.

With p(x) = c x^3 / (1 + a x + b x^3) and
G(x) = 1/c - x - m (1 + a x + b x^3) / (c x^2).  H is the primitive of
g = (x - n G) / p, theta(x) is the involution with H(theta(x)) = H(x), and
the focal values are the Taylor coefficients of F(theta(x)) - F(x) with
F = -G + G(x2) + int n/p.

Everything is carried as jets in the local variable s = x - x2.
"""

import logging
import math
from typing import NamedTuple, Optional, Sequence

import numpy as np

from core.config import get_tolerances
from core.exceptions import ConstraintViolation, EquilibriumLost, H2Zero
from models.focus import CodimJacobian, FocalUnfolding, FocusReport, FocusStability
from models.params import DimensionlessParams
from services.local_analysis import upper_equilibrium
from utils.jets import Jet

logger = logging.getLogger(__name__)

PARAMETER_NAMES = ("a", "b", "c", "m", "n")
FOCAL_INDICES = (1, 3, 5, 7)


class LienardSeries(NamedTuple):
    p: Jet
    G: Jet
    n_over_p: Jet
    H: Jet
    F: Jet
    script_G: Jet  # G - int n/p


def lienard_series(
    params: DimensionlessParams, x2: float, order: Optional[int] = None
) -> LienardSeries:
    order = get_tolerances().JET_ORDER if order is None else order
    a, b, c, m, n = params.as_tuple()
    X = Jet.variable(x2, order)
    D = 1.0 + a * X + b * X**3
    p = c * X**3 / D
    G = 1.0 / c - X - m * D / (c * X**2)
    n_over_p = n / p
    H = ((X - n * G) / p).integral()
    primitive = n_over_p.integral()
    F = -G + G.value + primitive
    return LienardSeries(p=p, G=G, n_over_p=n_over_p, H=H, F=F, script_G=G - primitive)


# ============================================================================
# Closed-form derivatives (test oracles)
# ============================================================================

def closed_form_p_derivatives(params: DimensionlessParams, x: float) -> list[float]:
    """p, p', ..., p^(5) at x."""
    a, b, c, _, _ = params.as_tuple()
    D = 1.0 + a * x + b * x**3
    return [
        c * x**3 / D,
        c * x * x * (2 * a * x + 3) / D**2,
        2 * c * x * (a * a * x * x + 3 * a * x - 3 * a * b * x**4 - 6 * b * x**3 + 3) / D**3,
        6 * c * (-2 * b * x**3 * (2 * a * a * x * x + 7 * a * x + 8) + 2 * x**6 * b * b * (2 * a * x + 5) + 1) / D**4,
        -24 * c / D**5 * (
            a**3 * b * x**5
            + 5 * a * a * b * x**4 * (1 - 2 * b * x**3)
            + a * (5 * b**3 * x**9 - 40 * b * b * x**6 + 10 * b * x**3 + 1)
            + 3 * b * x * x * (5 * b * b * x**6 - 17 * b * x**3 + 5)
        ),
        120 * c / D**6 * (
            6 * a**3 * b * b * x**7
            + a * a * (1 - 20 * b**3 * x**9 + 33 * b * b * x**6)
            + 6 * a * b * x * x * (b**3 * x**9 - 15 * b * b * x**6 + 12 * b * x**3 + 1)
            + 3 * b * x * (7 * b**3 * x**9 - 42 * b * b * x**6 + 30 * b * x**3 - 2)
        ),
    ]


def closed_form_g_derivatives(
    params: DimensionlessParams, x: float, up_to: int = 7
) -> list[float]:
    """G', G'', ..., G^(up_to) at x."""
    a, b, c, m, _ = params.as_tuple()
    values = [(-c * x**3 + m * (a * x - b * x**3 + 2)) / (c * x**3)]
    for k in range(2, up_to + 1):
        values.append((-1) ** k * math.factorial(k) * m * (a * x + k + 1) / (c * x ** (k + 2)))
    return values


def lienard_h_closed_form(params: DimensionlessParams, x2: float) -> list[float]:
    """h2..h7 expanded through p and G derivatives; valid only at an equilibrium."""
    n = params.n
    p0, p1, p2, p3, p4, p5 = closed_form_p_derivatives(params, x2)
    G1, G2, G3, G4, G5, G6 = closed_form_g_derivatives(params, x2, up_to=6)
    u = 1.0 / n - G1
    h2 = (1 - n * G1) / p0
    h3 = 2 * p1 * (n * G1 - 1) / p0**2 - n * G2 / p0
    h4 = -n * G3 / p0 + 3 * n * G2 * p1 / p0**2 + u * (6 * n * p1**2 / p0**3 - 3 * n * p2 / p0**2)
    h5 = (
        -n * G4 / p0 + 4 * n * G3 * p1 / p0**2 + 6 * n * G2 * p2 / p0**2 - 12 * n * G2 * p1**2 / p0**3
        + u * (-4 * n * p3 / p0**2 - 24 * n * p1**3 / p0**4 + 24 * n * p1 * p2 / p0**3)
    )
    h6 = (
        -n * G5 / p0
        + 5 * n * G4 * p1 / p0**2
        + G3 * (10 * n * p2 / p0**2 - 20 * n * p1**2 / p0**3)
        + G2 * (10 * n * p3 / p0**2 + 60 * n * p1**3 / p0**4 - 60 * n * p1 * p2 / p0**3)
        + u * (
            -5 * n * p4 / p0**2 + 30 * n * p2**2 / p0**3 + 120 * n * p1**4 / p0**5
            + 40 * n * p3 * p1 / p0**3 - 180 * n * p1**2 * p2 / p0**4
        )
    )
    h7 = (
        -n * G6 / p0
        + 6 * n * G5 * p1 / p0**2
        + G4 * (15 * n * p2 / p0**2 - 30 * n * p1**2 / p0**3)
        + G3 * (20 * n * p3 / p0**2 + 120 * n * p1**3 / p0**4 - 120 * n * p1 * p2 / p0**3)
        + G2 * (
            15 * n * p4 / p0**2 - 90 * n * p2**2 / p0**3 - 360 * n * p1**4 / p0**5
            - 120 * n * p3 * p1 / p0**3 + 540 * n * p1**2 * p2 / p0**4
        )
        + u * (
            -6 * n * p5 / p0**2 - 720 * n * p1**5 / p0**6 + 60 * n * p4 * p1 / p0**3
            + 120 * n * p3 * p2 / p0**3 - 360 * n * p3 * p1**2 / p0**4
            + 1440 * n * p1**3 * p2 / p0**5 - 540 * n * p1 * p2**2 / p0**4
        )
    )
    return [h2, h3, h4, h5, h6, h7]


def h2_closed_form(params: DimensionlessParams, x2: float) -> float:
    a, b, c, m, n = params.as_tuple()
    return n * (a * x2 + b * x2**3 + 1) * (x2 * x2 - m * (2 * a * x2 + 3)) / (c * c * x2**6)


# ============================================================================
# Involution and focal values
# ============================================================================

def lienard_h(params: DimensionlessParams, x2: float) -> list[float]:
    """h2..h7, the derivatives of H at x2."""
    H = lienard_series(params, x2).H
    return [H.derivative_at(k) for k in range(2, 8)]


def nu_coefficients(h: Sequence[float]) -> list[float]:
    """nu2..nu6 of theta(x) = -x + nu2 x^2 + ... from h2..h7."""
    h2, h3, h4, h5, h6, h7 = h
    if h2 == 0.0:
        raise H2Zero("h2 vanishes; the involution is undefined")
    nu2 = -h3 / (3 * h2)
    nu3 = -nu2**2
    nu4 = (h5 + 10 * h4 * nu2) / (-60 * h2) + 2 * nu2**3
    nu5 = h4 / (2 * h2) * nu2**2 + h5 * nu2 / (20 * h2) - 4 * nu2**4
    nu6 = (
        -19 * h4 * nu2**3 / (12 * h2)
        - 11 * h5 * nu2**2 / (60 * h2)
        + (70 * h4**2 - 21 * h2 * h6) * nu2 / (2520 * h2**2)
        + (7 * h4 * h5 - h2 * h7) / (2520 * h2**2)
        + 9 * nu2**5
    )
    return [nu2, nu3, nu4, nu5, nu6]


def theta_series(H: Jet, iterations: int = 40) -> Jet:
    """Series theta with theta(0) = 0, theta'(0) = -1 and H(theta) = H, by Newton on jets."""
    if H[2] == 0.0:
        raise H2Zero("h2 vanishes; the involution is undefined")
    theta = Jet([0.0, -1.0], H.order)
    dH = H.derivative()
    for _ in range(iterations):
        residual = H.compose(theta) - H
        slope = dH.compose(theta)
        step = residual.shift_down() / slope.shift_down()
        theta = theta - step
        theta.coeffs[0] = 0.0
        if np.max(np.abs(step.coeffs)) <= 1e-15 * np.max(np.abs(theta.coeffs)):
            break
    return theta


def _order_and_stability(focal: Sequence[float], tol: float) -> tuple[int, FocusStability]:
    for k, value in enumerate(focal):
        following = abs(focal[k + 1]) if k + 1 < len(focal) else 0.0
        if abs(value) >= tol * max(1.0, following):
            return k, FocusStability.UNSTABLE if value > 0 else FocusStability.STABLE
    return len(focal) - 1, FocusStability.UNDETERMINED


def focal_values(
    params: DimensionlessParams, x2: Optional[float] = None, tol: Optional[float] = None
) -> FocusReport:
    """
    Focal values, weak-focus order and stability at E2.

    The order is the first k with B_(2k+1) (derivative normalisation) not
    vanishing relative to the next odd focal value: |B| < tol * max(1, |B_next|)
    counts as zero. E2 is unstable when the first surviving value is positive.
    """
    tol = get_tolerances().FOCUS_VANISHING_TOL if tol is None else tol
    if x2 is None:
        e2 = upper_equilibrium(params)
        if e2 is None:
            raise EquilibriumLost("no upper equilibrium E2 for these parameters")
        x2 = e2.x

    series = lienard_series(params, x2)
    h = [series.H.derivative_at(k) for k in range(2, 8)]
    if h[0] <= 0.0:
        logger.warning(f"h2 = {h[0]} is not positive at x2={x2}")
    nu = nu_coefficients(h)
    theta = theta_series(series.H)
    B = series.F.compose(theta) - series.F
    coefficients = [B[k] for k in range(1, 9)]
    odd = [coefficients[k - 1] for k in FOCAL_INDICES]
    nu2 = nu[0]
    even = [-(k / 2.0) * nu2 * value for k, value in zip(FOCAL_INDICES, odd)]
    derivatives = {f"B{k}": math.factorial(k) * coefficients[k - 1] for k in FOCAL_INDICES}
    order, stability = _order_and_stability(list(derivatives.values()), tol)
    logger.debug(f"focal values at x2={x2}: {derivatives}, order {order}")
    return FocusReport(
        x2=x2,
        h=h,
        nu=nu,
        coefficients=coefficients,
        even=even,
        order=order,
        stability=stability,
        **derivatives,
    )


# ============================================================================
# Independence of the focal values
# ============================================================================

def _odd_focal_values(params: DimensionlessParams, indices: Sequence[int]) -> np.ndarray:
    """B_k = k! times the Taylor coefficient, the normalisation of FocusReport.B1..B7."""
    e2 = upper_equilibrium(params)
    if e2 is None:
        raise EquilibriumLost(
            f"perturbation left the two-equilibrium regime at {params.model_dump()}",
            params.model_dump(),
        )
    report = focal_values(params, e2.x)
    return np.array([math.factorial(k) * report.coefficients[k - 1] for k in indices])


def _check_selection(which: Sequence[str], B_list: Sequence[int]) -> None:
    if len(which) != len(B_list):
        raise ConstraintViolation(
            f"{len(which)} parameters for {len(B_list)} focal values", {"which": list(which)}
        )
    unknown = [name for name in which if name not in PARAMETER_NAMES]
    bad_index = [k for k in B_list if k not in FOCAL_INDICES]
    if unknown or bad_index:
        raise ConstraintViolation(
            f"unknown parameters {unknown} or focal indices {bad_index}",
            {"parameters": unknown, "indices": bad_index},
        )


def codim_jacobian(
    params: DimensionlessParams,
    which: Sequence[str],
    B_list: Sequence[int],
    rel_step: Optional[float] = None,
) -> CodimJacobian:
    """
    Central-difference Jacobian of the selected focal values B_k (derivative
    normalisation) with respect to the selected parameters, x2 re-solved at
    every perturbed point and each column refined once by Richardson
    extrapolation.
    """
    rel_step = get_tolerances().CODIM_REL_STEP if rel_step is None else rel_step
    _check_selection(which, B_list)

    def column(name: str, step: float) -> np.ndarray:
        base = getattr(params, name)
        plus = _odd_focal_values(params.replace(**{name: base + step}), B_list)
        minus = _odd_focal_values(params.replace(**{name: base - step}), B_list)
        return (plus - minus) / (2.0 * step)

    columns = []
    for name in which:
        h = rel_step * max(abs(getattr(params, name)), 1e-8)
        coarse, fine = column(name, h), column(name, h / 2.0)
        columns.append((4.0 * fine - coarse) / 3.0)
    matrix = np.column_stack(columns)
    determinant = float(np.linalg.det(matrix))
    logger.info(f"det d(B{list(B_list)})/d({', '.join(which)}) = {determinant:.6g}")
    return CodimJacobian(
        parameters=list(which),
        focal_indices=list(B_list),
        matrix=matrix.tolist(),
        determinant=determinant,
    )


# ============================================================================
# Steering focal values
# ============================================================================

def nested_cycle_targets(leading: float, amplitudes: Sequence[float]) -> list[float]:
    """
    B_1, B_3, ... B_(2N-1) placing small cycles at ``amplitudes`` when the
    leading focal value B_(2N+1) stays at ``leading``.

    The displacement near E2 is sum c_(2k+1) s^(2k+1) with c_k = B_k / k!.
    Its nonzero roots are the amplitudes when the polynomial in s^2 factors as
    c_(2N+1) prod(s^2 - amplitude^2).
    """
    count = len(amplitudes)
    if count == 0 or any(value <= 0.0 for value in amplitudes):
        raise ConstraintViolation("amplitudes must be positive", {"amplitudes": list(amplitudes)})
    leading_coefficient = leading / math.factorial(2 * count + 1)
    product = np.poly(np.square(np.asarray(amplitudes, dtype=float)))
    return [
        math.factorial(2 * k + 1) * leading_coefficient * float(product[count - k])
        for k in range(count)
    ]


def unfold_focal_values(
    params: DimensionlessParams,
    which: Sequence[str],
    B_list: Sequence[int],
    targets: Sequence[float],
    steps: Optional[int] = None,
    iterations: Optional[int] = None,
) -> FocalUnfolding:
    """
    Move the parameters named in ``which`` until the focal values in ``B_list``
    equal ``targets``. The targets are approached in ``steps`` equal fractions,
    each polished by Newton iterations on codim_jacobian.
    """
    tolerances = get_tolerances()
    steps = tolerances.UNFOLD_STEPS if steps is None else steps
    iterations = tolerances.UNFOLD_ITERATIONS if iterations is None else iterations
    _check_selection(which, B_list)
    if len(targets) != len(B_list):
        raise ConstraintViolation(
            f"{len(targets)} targets for {len(B_list)} focal values", {"targets": list(targets)}
        )
    goal = np.asarray(targets, dtype=float)
    current = params
    for step in range(1, steps + 1):
        target = goal * step / steps
        for _ in range(iterations):
            residual = _odd_focal_values(current, B_list) - target
            jacobian = np.array(codim_jacobian(current, which, B_list).matrix)
            delta = np.linalg.solve(jacobian, -residual)
            current = current.replace(
                **{name: getattr(current, name) + float(d) for name, d in zip(which, delta)}
            )
        logger.debug(f"unfolding step {step}/{steps}: {current.model_dump()}")
    values = _odd_focal_values(current, B_list)
    scale = np.maximum(1.0, np.abs(goal))
    residual = float(np.max(np.abs(values - goal) / scale))
    logger.info(f"focal values B{list(B_list)} steered to {values.tolist()} (residual {residual:.3g})")
    return FocalUnfolding(
        params=current,
        parameters=list(which),
        focal_indices=list(B_list),
        targets=goal.tolist(),
        values=values.tolist(),
        residual=residual,
    )
