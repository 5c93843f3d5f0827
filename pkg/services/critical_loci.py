"""
Closed-form critical loci: the Bogdanov-Takens point x*, the saddle-node
pair (n*, c*), the codimension-3 triple (c*, n*, b*), the psychological
effect thresholds and the normal-form coefficients xi1..xi8, zeta, eta, chi.

The codimension-3 forms are written in v = a x*, the substitution the
closed forms are simplest in.
"""

import logging
import math
from typing import Optional

import numpy as np

from core.config import get_tolerances
from core.exceptions import (
    ComplexRoots,
    ConditionFailed,
    DegenerateDenominator,
    EtaNotZero,
)
from models.critical import (
    CriticalPoint,
    CriticalRegime,
    EradicationCase,
    GammaThresholds,
    NormalFormCoeffs,
)
from models.params import DimensionalParams, DimensionlessParams
from services.model_core import (
    jacobian,
    nondimensionalize,
    scale_factor,
    validate_dimensional,
)
from utils.jets import Jet

logger = logging.getLogger(__name__)


def x_star(a: float, m: float) -> float:
    """Positive root of x^2 - 2 a m x - 3 m = 0."""
    if m <= 0.0:
        raise ConditionFailed(f"m > 0 required (m={m})", {"m": m})
    return a * m + math.sqrt(a * a * m * m + 3.0 * m)


# ============================================================================
# Codimension two
# ============================================================================

def sn_condition(a: float, b: float, m: float, n: float, x: float) -> float:
    """-b m n x^3 + n x^2 - a m n x - m n; positive where c* is admissible."""
    return -b * m * n * x**3 + n * x**2 - a * m * n * x - m * n


def c_star_formula(a: float, b: float, m: float, n: float, x: float) -> float:
    """c* written through the saddle-node condition, for cross-checking n^2 D / x^3."""
    return sn_condition(a, b, m, n, x) / ((n + 1.0) * x**3)


def sn_critical(a: float, b: float, m: float) -> tuple[float, float]:
    """
    (n*, c*) at which (x*, x*/n*) is a double equilibrium with zero trace.

    n* is the positive root of D n^2 + D n + m D - x*^2 = 0 with
    D = 1 + a x* + b x*^3, and c* = n*^2 D / x*^3.
    """
    x = x_star(a, m)
    D = 1.0 + a * x + b * x**3
    if D <= 0.0:
        raise ConditionFailed(f"1 + a x* + b x*^3 = {D} <= 0", {"denominator": D})
    disc = D * ((1.0 - 4.0 * m) * D + 4.0 * x * x)
    if disc < 0.0 or m * D >= x * x:
        raise ConditionFailed(
            f"no positive n*: discriminant {disc}, m D - x*^2 = {m * D - x * x}",
            {"discriminant": disc, "constant_term": m * D - x * x},
        )
    n = 0.5 * (-1.0 + math.sqrt(disc) / D)
    condition = sn_condition(a, b, m, n, x)
    if condition <= 0.0:
        raise ConditionFailed(
            f"saddle-node condition fails at n*={n} (value {condition})",
            {"n_star": n, "condition": condition},
        )
    c = n * n * D / x**3
    logger.debug(f"sn_critical: x*={x}, n*={n}, c*={c}")
    return n, c


def critical_point(a: float, b: float, m: float) -> CriticalPoint:
    x = x_star(a, m)
    n, c = sn_critical(a, b, m)
    return CriticalPoint(x_star=x, y_star=x / n, n_star=n, c_star=c, regime=CriticalRegime.CODIM2)


def c_for_double_root(params: DimensionlessParams) -> list[float]:
    """Positive c making the discriminant vanish with a, b, m, n held fixed.

    The discriminant's sign factor is quadratic in c as well as in b.
    """
    a, b, _, m, n = params.as_tuple()
    qa = 27.0 * m * (n + 1.0) ** 2
    qb = 54.0 * m * m * n * (n + 1.0) * b + 2.0 * a * m * (2.0 * a * a * m + 9.0) * n * (n + 1.0)
    qc = (
        27.0 * m**3 * n * n * b * b
        + (4.0 * a**3 * m**3 * n * n + 18.0 * a * m * m * n * n) * b
        - (4.0 + a * a * m) * n * n
    )
    roots = _quadratic_roots(qa, qb, qc)
    return [r for r in roots if r > 0.0]


# ============================================================================
# Psychological effect thresholds
# ============================================================================

def _quadratic_roots(qa: float, qb: float, qc: float) -> tuple[float, float]:
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        raise ComplexRoots(f"quadratic discriminant {disc} < 0", {"discriminant": disc})
    # Cancellation-free pair
    s = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
    if s == 0.0:
        return 0.0, 0.0
    r1, r2 = s / qa, qc / s
    return (r1, r2) if r1 <= r2 else (r2, r1)


def rho_coefficients(a: float, c: float, m: float, n: float) -> tuple[float, float, float]:
    """Coefficients of the discriminant's sign factor as a quadratic in b."""
    return (
        27.0 * m**3 * n**2,
        4.0 * a**3 * m**3 * n**2 + 18.0 * a * m**2 * n**2 + 54.0 * c * m**2 * n * (n + 1.0),
        27.0 * c**2 * m * (n + 1.0) ** 2
        + 2.0 * a * c * m * (2.0 * a**2 * m + 9.0) * n * (n + 1.0)
        - (4.0 + a**2 * m) * n**2,
    )


def b_roots(a: float, c: float, m: float, n: float) -> tuple[float, float]:
    """b1 < b2 with the discriminant zero."""
    return _quadratic_roots(*rho_coefficients(a, c, m, n))


def b_roots_closed_form(a: float, c: float, m: float, n: float) -> tuple[float, float]:
    common = 2.0 * a**3 * m**3 * n + 9.0 * a * m**2 * n + 27.0 * c * m**2 * (n + 1.0)
    radical = 2.0 * n * (m * (a * a * m + 3.0)) ** 1.5
    denom = 27.0 * m**3 * n
    return -(common + radical) / denom, -(common - radical) / denom


def b_to_gamma(b: float, params: DimensionalParams) -> float:
    return b * params.kappa * params.Lambda / (params.d * params.mu * scale_factor(params))


def gamma_thresholds_direct(params: DimensionalParams) -> tuple[float, float]:
    """gamma1, gamma2 written in the dimensional parameters."""
    L, d, mu, delta, kappa, beta = (
        params.Lambda, params.d, params.mu, params.delta, params.kappa, params.beta,
    )
    base = -mu * (
        2.0 * beta**3 / (27.0 * mu)
        + beta * kappa * L / (3.0 * d * mu * (d + mu))
        + kappa * (d + delta + mu) / (mu * (d + delta) * (d + mu))
    )
    radical = 2.0 / 27.0 * (
        (beta**2 * d**2 + beta**2 * d * mu + 3.0 * kappa * L) / (d * (d + mu))
    ) ** 1.5
    return base - radical, base + radical


def eradication_regime(gamma1: float, gamma2: float) -> tuple[EradicationCase, list[tuple[float, float]]]:
    """Case of (gamma1, gamma2) against zero and the gamma ranges that eradicate."""
    if gamma2 < 0.0:
        return EradicationCase.BOTH_NEGATIVE, [(0.0, math.inf)]
    if gamma1 < 0.0:
        return EradicationCase.STRADDLING, [(gamma2, math.inf)]
    return EradicationCase.BOTH_POSITIVE, [(0.0, gamma1), (gamma2, math.inf)]


def gamma_thresholds(params: DimensionalParams) -> GammaThresholds:
    """Thresholds from the b-roots mapped back through the scaling; gamma itself is ignored."""
    validate_dimensional(params)
    reduced = nondimensionalize(params)
    b1, b2 = b_roots(reduced.a, reduced.c, reduced.m, reduced.n)
    g1, g2 = b_to_gamma(b1, params), b_to_gamma(b2, params)
    case, ranges = eradication_regime(g1, g2)
    logger.info(f"gamma thresholds {g1:.6g} < {g2:.6g} ({case.value})")
    return GammaThresholds(b1=b1, b2=b2, gamma1=g1, gamma2=g2, case=case, eradication_ranges=ranges)


# ============================================================================
# Normal-form coefficients
# ============================================================================

def _incidence_jet(params: DimensionlessParams, x: float, order: int) -> Jet:
    X = Jet.variable(x, order)
    return X**3 / (1.0 + params.a * X + params.b * X**3)


def xi_coefficients(
    params: DimensionlessParams, x: float, higher: bool = False
) -> NormalFormCoeffs:
    """
    Taylor coefficients of the vector field at (x, x/n).

    xi1, xi3, xi5, xi7 multiply s, s^2, s^3, s^4 in dx/dt; xi2, xi4, xi6, xi8
    multiply t, s t, s^2 t, s^3 t.  With ``higher`` the cubic and quartic
    terms are included.
    """
    _, _, c, m, n = params.as_tuple()
    A = _incidence_jet(params, x, 5)
    y = x / n
    level = 1.0 - c * (x + y)

    def fx(k: int) -> float:
        return A[k] * level - c * A[k - 1] - (m if k == 1 else 0.0)

    def fy(k: int) -> float:
        return -c * A[k]

    xi1, xi2, xi3, xi4 = fx(1), fy(0), fx(2), fy(1)
    zeta = xi3 - xi1 * xi4 / xi2
    eta = 2.0 * xi3 - xi1 * xi4 / xi2
    extra = {}
    if higher:
        extra = {"xi5": fx(3), "xi6": fy(2), "xi7": fx(4), "xi8": fy(3)}
    return NormalFormCoeffs(xi1=xi1, xi2=xi2, xi3=xi3, xi4=xi4, zeta=zeta, eta=eta, **extra)


def xi_closed_form(params: DimensionlessParams, x: float) -> list[float]:
    """xi3..xi8 as rational functions of x, valid at a Bogdanov-Takens point."""
    a, b, c, m, n = params.as_tuple()
    D = 1.0 + a * x + b * x**3
    xi3 = -x * (
        -2 * a * a * m * n - 6 * n + (9 * b * m * n + 12 * c * n + 6 * c) * x
        + 4 * a * c * n * x * x + 3 * b * n * x**3
    ) / (2 * n * D * D)
    xi4 = -c * x * x * (2 * a * x + 3) / D**2
    xi5 = -1.0 / (n * D**3) * (
        x**3 * (a * a * c * n + 13 * b * n)
        - a * a * m * n
        + x**5 * (-4 * a * b * b * m * n - 7 * a * b * c * n - 4 * a * b * c)
        + x**4 * (4 * a * b * n - 19 * b * b * m * n - 19 * b * c * n - 13 * b * c)
        + x**2 * (-4 * a * b * m * n + 2 * a * c * n - a * c)
        + x * (a * n + 4 * b * m * n + 4 * c * n + c)
        - 4 * b * b * n * x**6
        + x**7 * (4 * b**3 * m * n + 4 * b * b * c * n + 4 * b * b * c)
        - n
    )
    xi6 = -c * x * (a * a * x * x - 3 * a * b * x**4 + 3 * a * x - 6 * b * x**3 + 3) / D**3
    xi7 = -1.0 / (n * D**4) * (
        a**3 * m * n
        + x**5 * (-a * a * b * b * m * n - 5 * a * a * b * c * n - a * a * b * c - 35 * b * b * n)
        + x**4 * (a * a * b * n + 5 * a * b * b * m * n - 14 * a * b * c * n)
        + x**2 * (5 * a * a * b * m * n + a * a * c * n + a * a * c + 14 * b * n)
        + x * (-a * a * n - 5 * a * b * m * n - a * c * n - a * c)
        + x**7 * (10 * a * b**3 * m * n + 14 * a * b * b * c * n + 10 * a * b * b * c)
        + x**6 * (-10 * a * b * b * n + 45 * b**3 * m * n + 45 * b * b * c * n + 35 * b * b * c)
        + a * n
        + 5 * b**3 * n * x**8
        + x**3 * (-30 * b * b * m * n - 30 * b * c * n - 14 * b * c)
        + x**9 * (-5 * b**4 * m * n - 5 * b**3 * c * n - 5 * b**3 * c)
        + b * m * n
        + c * n
    )
    xi8 = c * (2 * b * x**3 * (2 * a * a * x * x + 7 * a * x + 8) - 2 * b * b * x**6 * (2 * a * x + 5) - 1) / D**4
    return [xi3, xi4, xi5, xi6, xi7, xi8]


def zeta_rational(params: DimensionlessParams, x: float) -> float:
    """zeta with xi1 = n and xi2 = -n^2 substituted."""
    a, b, c, m, n = params.as_tuple()
    D = 1.0 + a * x + b * x**3
    return -x * (
        -2 * a * a * m * n - 6 * n + (9 * b * m * n + 12 * c * n + 12 * c) * x
        + (4 * a * c + 4 * a * c * n) * x * x + 3 * b * n * x**3
    ) / (2 * n * D * D)


def eta_rational(params: DimensionlessParams, x: float) -> float:
    a, b, c, m, n = params.as_tuple()
    D = 1.0 + a * x + b * x**3
    return -x * (
        -2 * a * a * m * n - 6 * n + (9 * b * m * n + 12 * c * n + 9 * c) * x
        + (2 * a * c + 4 * a * c * n) * x * x + 3 * b * n * x**3
    ) / (n * D * D)


# ============================================================================
# Codimension three
# ============================================================================

def bt3_critical(a: float, m: float) -> CriticalPoint:
    """
    (c*, n*, b*) with zero trace, zero determinant and eta = 0 at x*.

    Raises DegenerateDenominator when 2 a x* + 3 <= 0 or the c* denominator vanishes.
    """
    x = x_star(a, m)
    v = a * x
    if 2.0 * v + 3.0 <= 0.0:
        raise DegenerateDenominator(
            f"2 a x* + 3 = {2.0 * v + 3.0} <= 0", {"a": a, "m": m, "x_star": x}
        )
    c_denominator = x * (
        m * (4 * a * a * x * x + 60 * a * x + 90) + 8 * a * a * x * x + 30 * a * x - 18 * x * x + 27
    )
    if abs(c_denominator) < 1e-14:
        raise DegenerateDenominator("c* denominator vanishes", {"a": a, "m": m})
    c = 4.0 * m * (v + 3.0) ** 2 / c_denominator
    n = 2.0 * m * (v + 3.0) / (2.0 * v + 3.0)
    b = (
        2 * a * a * m * n - 4 * a * c * n * x * x - 2 * a * c * x * x - 12 * c * n * x - 9 * c * x + 6 * n
    ) / (9 * m * n * x + 3 * n * x**3)
    if min(b, c, n) <= 0.0:
        raise ConditionFailed(
            f"codimension-3 triple is not admissible (b={b}, c={c}, n={n})",
            {"b_star": b, "c_star": c, "n_star": n},
        )
    return CriticalPoint(
        x_star=x, y_star=x / n, n_star=n, c_star=c, b_star=b, regime=CriticalRegime.CODIM3
    )


def bt3_params(a: float, m: float) -> DimensionlessParams:
    point = bt3_critical(a, m)
    return DimensionlessParams(a=a, b=point.b_star, c=point.c_star, m=m, n=point.n_star)


def chi(
    params: DimensionlessParams, x: float, tol: Optional[float] = None
) -> float:
    """Third-order cusp coefficient from xi1..xi8 (requires eta = 0)."""
    tol = get_tolerances().CRITICAL_TOL if tol is None else tol
    coeffs = xi_coefficients(params, x, higher=True)
    if abs(coeffs.eta) > tol * max(1.0, abs(coeffs.zeta)):
        raise EtaNotZero(f"eta = {coeffs.eta} is not zero", {"eta": coeffs.eta})
    n = params.n
    _, _, x3, _, x5, x6, x7, x8 = coeffs.xi
    value = -(
        3 * n * n * x5**2
        + x3**2 * (8 * n * x5 + 6 * x6)
        + n * x3 * (4 * n * x7 + 3 * x8)
        + 5 * n * x5 * x6
        + 4 * x3**4
        + 2 * x6**2
    ) / (n**5 * x3**4)
    if value == 0.0:
        logger.warning("chi vanishes; the cusp is of higher codimension")
    return value


def hbar(v: float, x: float) -> float:
    """Sign factor of chi in v = a x*."""
    return (
        32 * (v + 3) ** 6 * x**4
        + 16 * (v + 3) ** 3 * (2 * v + 3) ** 2 * (2 * v * v + 10 * v + 15) * x * x
        + (2 * v + 3) ** 4 * (2 * v**3 + 21 * v * v + 108 * v + 162)
    )


def chi_rational(a: float, x: float) -> float:
    """chi at the codimension-3 point as a rational function of a and x*."""
    v = a * x
    psi = (
        16 * a**3 * x**3 + 4 * a * a * (x * x + 21) * x * x + 24 * a * (x * x + 6) * x + 9 * (4 * x * x + 9)
    )
    return (2 * v + 3) ** 10 / (8 * x**10 * (v + 3) ** 7 * psi**2) * hbar(v, x)


def normal_form(
    params: DimensionlessParams, x: Optional[float] = None, higher: bool = False
) -> NormalFormCoeffs:
    """xi, zeta, eta at x (default x*), with chi attached when eta vanishes."""
    x = x_star(params.a, params.m) if x is None else x
    coeffs = xi_coefficients(params, x, higher=higher)
    tol = get_tolerances().CRITICAL_TOL
    if higher and abs(coeffs.eta) <= tol * max(1.0, abs(coeffs.zeta)):
        return coeffs.model_copy(update={"chi": chi(params, x)})
    return coeffs


def critical_residuals(params: DimensionlessParams, x: float) -> dict[str, float]:
    """trace, det and eta at (x, x/n), each scaled for the critical-point tests."""
    J = jacobian((x, x / params.n), params)
    norm = float(np.linalg.norm(J))
    coeffs = xi_coefficients(params, x)
    return {
        "trace": float(np.trace(J)) / norm,
        "det": float(np.linalg.det(J)) / norm**2,
        "eta": coeffs.eta / max(1.0, abs(coeffs.zeta)),
    }
