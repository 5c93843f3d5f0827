"""
Positive equilibria of the reduced system.

Endemic equilibria solve  K x^3 - n x^2 + a m n x + m n = 0  with
K = c (n + 1) + b m n and y = x / n.  Dividing by K and shifting
x = z - theta/3 gives the depressed cubic z^3 + p z + q whose discriminant
(p/3)^3 + (q/2)^2 counts the positive equilibria.
"""

import logging
import math
from typing import Optional

import numpy as np

from core.config import get_tolerances
from core.exceptions import NotARoot
from models.equilibrium import Equilibrium, EquilibriumKind, ReducedCubic
from models.params import DimensionlessParams

logger = logging.getLogger(__name__)


def leading_coefficient(params: DimensionlessParams) -> float:
    a, b, c, m, n = params.as_tuple()
    return c * (n + 1.0) + b * m * n


def reduce(params: DimensionlessParams) -> ReducedCubic:
    a, b, c, m, n = params.as_tuple()
    K = leading_coefficient(params)
    theta = -n / K
    p1 = a * m * n / K
    q1 = m * n / K
    p = p1 - theta**2 / 3.0
    q = 2.0 * theta**3 / 27.0 - theta * p1 / 3.0 + q1
    return ReducedCubic(theta=theta, p1=p1, q1=q1, p=p, q=q)


def discriminant_pq(p: float, q: float) -> float:
    return (p / 3.0) ** 3 + (q / 2.0) ** 2


def discriminant(params: DimensionlessParams) -> float:
    rc = reduce(params)
    return discriminant_pq(rc.p, rc.q)


def rho_tilde(params: DimensionlessParams, b: Optional[float] = None) -> float:
    """The quadratic in b whose sign is the sign of the discriminant."""
    a, b_param, c, m, n = params.as_tuple()
    b = b_param if b is None else b
    return (
        27.0 * m**3 * n**2 * b**2
        + (4.0 * a**3 * m**3 * n**2 + 18.0 * a * m**2 * n**2 + 54.0 * c * m**2 * n * (n + 1.0)) * b
        + 27.0 * c**2 * m * (n + 1.0) ** 2
        + 2.0 * a * c * m * (2.0 * a**2 * m + 9.0) * n * (n + 1.0)
        - (4.0 + a**2 * m) * n**2
    )


def discriminant_expanded(params: DimensionlessParams) -> float:
    """m n^2 rho(b) / (108 (b m n + c n + c)^4)."""
    m, n = params.m, params.n
    return m * n**2 * rho_tilde(params) / (108.0 * leading_coefficient(params) ** 4)


def is_discriminant_zero(rc: ReducedCubic, zero_tol: Optional[float] = None) -> bool:
    tol = get_tolerances().DISCRIMINANT_ZERO_REL if zero_tol is None else zero_tol
    return abs(discriminant_pq(rc.p, rc.q)) < tol * rc.scale


# ============================================================================
# Root solving
# ============================================================================

def depressed_roots(p: float, q: float) -> list[float]:
    """Real roots of z^3 + p z + q (Cardano for one root, trigonometric for three)."""
    if p == 0.0:
        return [-math.copysign(abs(q) ** (1.0 / 3.0), q)]
    d = discriminant_pq(p, q)
    if d > 0.0:
        s = math.sqrt(d)
        u = -q / 2.0 + s
        v = -q / 2.0 - s
        return [math.copysign(abs(u) ** (1.0 / 3.0), u) + math.copysign(abs(v) ** (1.0 / 3.0), v)]
    if d == 0.0:
        return sorted([3.0 * q / p, -3.0 * q / (2.0 * p)])
    r = 2.0 * math.sqrt(-p / 3.0)
    arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
    phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
    return sorted(r * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3))


def double_root(rc: ReducedCubic) -> tuple[float, float]:
    """(double, simple) roots in z when the discriminant is treated as zero."""
    if rc.p == 0.0:
        return 0.0, 0.0
    return -3.0 * rc.q / (2.0 * rc.p), 3.0 * rc.q / rc.p


def equilibrium_polynomial(x: float, params: DimensionlessParams) -> float:
    a, _, _, m, n = params.as_tuple()
    K = leading_coefficient(params)
    return K * x**3 - n * x**2 + a * m * n * x + m * n


def equilibrium_residual(x: float, params: DimensionlessParams) -> float:
    """Residual of the equilibrium cubic scaled by its largest term."""
    a, _, _, m, n = params.as_tuple()
    K = leading_coefficient(params)
    terms = [abs(K * x**3), abs(n * x**2), abs(a * m * n * x), abs(m * n)]
    return abs(equilibrium_polynomial(x, params)) / max(terms)


def _newton_polish(x: float, params: DimensionlessParams) -> float:
    a, _, _, m, n = params.as_tuple()
    K = leading_coefficient(params)
    slope = 3.0 * K * x**2 - 2.0 * n * x + a * m * n
    if slope == 0.0:
        return x
    step = equilibrium_polynomial(x, params) / slope
    return x - step


def solve_equilibria(
    params: DimensionlessParams, zero_tol: Optional[float] = None
) -> list[Equilibrium]:
    """
    All equilibria in the closed first quadrant, sorted by x.

    The disease-free state (0, 0) is always first.  When the discriminant lies
    inside the relative band ``zero_tol`` the positive root is reported once with
    multiplicity 2 (3 at the cusp point).
    """
    tolerances = get_tolerances()
    band = tolerances.DISCRIMINANT_ZERO_REL if zero_tol is None else zero_tol
    rc = reduce(params)
    shift = -rc.theta / 3.0
    found: list[tuple[float, int]] = []

    if is_discriminant_zero(rc, band):
        z_double, z_simple = double_root(rc)
        if abs(rc.p) <= band * max(1.0, rc.theta**2):
            found.append((shift, 3))
        else:
            found.append((z_double + shift, 2))
            found.append((_newton_polish(z_simple + shift, params), 1))
        logger.debug(f"Discriminant inside zero band; double root at x={z_double + shift}")
    else:
        for z in depressed_roots(rc.p, rc.q):
            found.append((_newton_polish(z + shift, params), 1))

    equilibria = [Equilibrium(x=0.0, y=0.0, multiplicity=1, kind=EquilibriumKind.DISEASE_FREE)]
    positives = sorted(
        (x, k) for x, k in found if x > tolerances.POSITIVE_ROOT_MIN
    )
    for x, k in positives:
        equilibria.append(
            Equilibrium(x=x, y=x / params.n, multiplicity=k, kind=EquilibriumKind.ENDEMIC)
        )
    return equilibria


def positive_equilibria(
    params: DimensionlessParams, zero_tol: Optional[float] = None
) -> list[Equilibrium]:
    return [e for e in solve_equilibria(params, zero_tol) if e.kind is EquilibriumKind.ENDEMIC]


def root_multiplicity(z0: float, rc: ReducedCubic, tol: float = 1e-9) -> int:
    """Order of z0 as a root of z^3 + p z + q."""
    p, q = rc.p, rc.q
    scale = max(1.0, abs(z0) ** 3, abs(p * z0), abs(q))
    value = z0**3 + p * z0 + q
    if abs(value) > tol * scale:
        raise NotARoot(f"z0={z0} is not a root (residual {value})", {"residual": value})
    first = 3.0 * z0**2 + p
    if abs(first) > tol * max(1.0, 3.0 * z0**2, abs(p)):
        return 1
    second = 6.0 * z0
    if abs(second) > tol:
        return 2
    return 3


def reduced_cubic_from_pq(p: float, q: float) -> ReducedCubic:
    """A ReducedCubic carrying only (p, q), for root-order queries on the (p, q)-plane."""
    return ReducedCubic(theta=0.0, p1=p, q1=q, p=p, q=q)


def real_root_count(params: DimensionlessParams) -> int:
    """Distinct real roots of the equilibrium cubic from the companion matrix (test oracle)."""
    a, _, _, m, n = params.as_tuple()
    roots = np.roots([leading_coefficient(params), -n, a * m * n, m * n])
    real = sorted(r.real for r in roots if abs(r.imag) <= 1e-9 * max(1.0, abs(r)))
    distinct = [r for i, r in enumerate(real) if i == 0 or abs(r - real[i - 1]) > 1e-7]
    return len(distinct)
