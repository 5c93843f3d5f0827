"""
Geometry of bifurcation sets: the (2,3)-cusp of double equilibria, the
degenerate-Hopf bifurcation surface BS with its singular set and front
classification, the radial potential of the Hopf normal form and the
swallowtail for context.

The Hopf normal form has radial part dr/dt = mu1 r + mu2 r^3 + mu3 r^5 - r^7,
the derivative of the potential v(r) = mu1 r^2/2 + mu2 r^4/4 + mu3 r^6/6 - r^8/8.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from models.dynamics import CycleStability
from models.geometry import (
    CurveLabel,
    CurveSample,
    FrontClass,
    FrontPoint,
    NormalFormCycle,
    NormalFormPortrait,
)

logger = logging.getLogger(__name__)

Vector3 = tuple[float, float, float]

NUMERIC_STEP = 1e-6
COMPLEX_STEP = 1e-20
CURVE_STEP = 1e-5
EDGE_TOL = 1e-6
ROOT_MERGE_TOL = 1e-4
SIDE_STEP = 1e-3


def triangulate(rows: int, cols: int) -> list[tuple[int, int, int]]:
    """Triangles of a row-major rows x cols grid, each quad split along its diagonal."""
    triangles = []
    for i in range(rows - 1):
        for j in range(cols - 1):
            k = i * cols + j
            triangles.append((k, k + 1, k + cols))
            triangles.append((k + 1, k + cols + 1, k + cols))
    return triangles


# ============================================================================
# Cusp of double equilibria
# ============================================================================

def cusp_point(z: float) -> tuple[float, float]:
    return (-3.0 * z * z, 2.0 * z**3)


def cusp_residual(p: float, q: float) -> float:
    return (p / 3.0) ** 3 + (q / 2.0) ** 2


def cusp_curve(z_grid: Sequence[float]) -> CurveSample:
    """(p, q) = (-3 z^2, 2 z^3), the zero set of (p/3)^3 + (q/2)^2."""
    return CurveSample(
        label=CurveLabel.CUSP_CURVE,
        points=[cusp_point(float(z)) for z in z_grid],
        parameterization="z",
    )


# ============================================================================
# Bifurcation surface BS
# ============================================================================

def _bs_map(r, mu3) -> np.ndarray:
    """BS for any real or complex r; even in r."""
    return np.array([mu3 * r**4 - 2.0 * r**6, 3.0 * r**4 - 2.0 * mu3 * r * r, mu3 + 0.0 * r])


def bs_surface(r: float, mu3: float) -> Vector3:
    if r < 0.0:
        raise ValueError(f"r must be non-negative (r={r})")
    return (mu3 * r**4 - 2.0 * r**6, 3.0 * r**4 - 2.0 * mu3 * r * r, mu3)


def bs_in_s(s: float, mu3: float) -> Vector3:
    """BS written in s = r^2; s < 0 gives the other half of the surface."""
    return (mu3 * s * s - 2.0 * s**3, 3.0 * s * s - 2.0 * mu3 * s, mu3)


def bs_partials(r: float, mu3: float) -> tuple[Vector3, Vector3]:
    d_r = (4.0 * mu3 * r**3 - 12.0 * r**5, 12.0 * r**3 - 4.0 * mu3 * r, 0.0)
    d_mu3 = (r**4, -2.0 * r * r, 1.0)
    return d_r, d_mu3


def bs_cross_product(r: float, mu3: float) -> Vector3:
    """4 r (3 r^2 - mu3) (1, r^2, r^4)."""
    factor = 4.0 * r * (3.0 * r * r - mu3)
    return (factor, factor * r * r, factor * r**4)


def unit_normal(r: float) -> Vector3:
    norm = math.sqrt(r**8 + r**4 + 1.0)
    return (1.0 / norm, r * r / norm, r**4 / norm)


def curve_c(r: float) -> Vector3:
    """Image of the cuspidal edge mu3 = 3 r^2."""
    return (r**6, -3.0 * r**4, 3.0 * r * r)


def singular_set(r: float, mu3: float, tol: float = 1e-12) -> bool:
    return abs(r * (3.0 * r * r - mu3)) < tol


def _classify_closed_form(r: float, mu3: float, tol: float) -> FrontClass:
    on_edge = abs(3.0 * r * r - mu3) < tol
    if on_edge and abs(r) < tol:
        return FrontClass.SWALLOWTAIL
    if on_edge:
        return FrontClass.CUSPIDAL_EDGE
    return FrontClass.REGULAR


# Numeric front criteria, from the map and its unit normal only.

def _d_r(r: float, mu3: float) -> np.ndarray:
    return np.imag(_bs_map(complex(r, COMPLEX_STEP), mu3)) / COMPLEX_STEP


def _d_mu3(r: float, mu3: float) -> np.ndarray:
    return np.imag(_bs_map(r, complex(mu3, COMPLEX_STEP))) / COMPLEX_STEP


def _reduced_d_r(r: float, mu3: float) -> np.ndarray:
    """d_r / r; at |r| < NUMERIC_STEP the central difference of d_r, which d_r(0) = 0 makes its limit."""
    if abs(r) >= NUMERIC_STEP:
        return _d_r(r, mu3) / r
    h = NUMERIC_STEP
    return (_d_r(h, mu3) - _d_r(-h, mu3)) / (2.0 * h)


def _reduced_jacobian(r: float, mu3: float) -> np.ndarray:
    return np.column_stack([_reduced_d_r(r, mu3), _d_mu3(r, mu3)])


def front_null_direction(r: float, mu3: float) -> tuple[np.ndarray, np.ndarray]:
    """Singular values of the reduced Jacobian and the right-singular vector of the smallest one."""
    _, sigma, vt = np.linalg.svd(_reduced_jacobian(r, mu3))
    return sigma, vt[-1]


def singular_function(r: float, mu3: float) -> float:
    """det(d_r / r, d_mu3, nu); its zero set is the singular curve of the front."""
    frame = np.column_stack([_reduced_jacobian(r, mu3), unit_normal(r)])
    return float(np.linalg.det(frame))


def _singular_gradient(r: float, mu3: float) -> np.ndarray:
    h = CURVE_STEP
    return np.array([
        (singular_function(r + h, mu3) - singular_function(r - h, mu3)) / (2.0 * h),
        (singular_function(r, mu3 + h) - singular_function(r, mu3 - h)) / (2.0 * h),
    ])


def _singular_tangent(r: float, mu3: float) -> Optional[np.ndarray]:
    gradient = _singular_gradient(r, mu3)
    norm = float(np.linalg.norm(gradient))
    if norm == 0.0:
        return None
    return np.array([-gradient[1], gradient[0]]) / norm


def _project_to_singular(point: np.ndarray, iterations: int = 4) -> np.ndarray:
    for _ in range(iterations):
        gradient = _singular_gradient(*point)
        point = point - singular_function(*point) * gradient / float(gradient @ gradient)
    return point


def _tangent_null_determinant(tangent: np.ndarray, eta: np.ndarray) -> float:
    return float(tangent[0] * eta[1] - tangent[1] * eta[0])


def classify_front_numeric(r: float, mu3: float, tol: float = 1e-8) -> FrontClass:
    """
    Front criteria on the map alone: rank drop of the reduced Jacobian, then
    the singular-curve tangent against the null direction, then the derivative
    of their determinant along the curve.
    """
    sigma, eta = front_null_direction(r, mu3)
    if sigma[-1] > tol * max(sigma[0], 1.0):
        return FrontClass.REGULAR

    tangent = _singular_tangent(r, mu3)
    if tangent is None:
        logger.warning(f"singular curve has no tangent at r={r}, mu3={mu3}")
        return FrontClass.REGULAR
    if abs(_tangent_null_determinant(tangent, eta)) > EDGE_TOL:
        return FrontClass.CUSPIDAL_EDGE

    determinants = []
    for sign in (1.0, -1.0):
        point = _project_to_singular(np.array([r, mu3]) + sign * CURVE_STEP * tangent)
        _, eta_side = front_null_direction(*point)
        tangent_side = _singular_tangent(*point)
        if tangent_side is None:
            logger.warning(f"singular curve has no tangent near r={r}, mu3={mu3}")
            return FrontClass.REGULAR
        eta_side = eta_side if eta_side @ eta >= 0.0 else -eta_side
        tangent_side = tangent_side if tangent_side @ tangent >= 0.0 else -tangent_side
        determinants.append(_tangent_null_determinant(tangent_side, eta_side))
    derivative = (determinants[0] - determinants[1]) / (2.0 * CURVE_STEP)
    if abs(derivative) > EDGE_TOL:
        return FrontClass.SWALLOWTAIL
    logger.warning(f"front criteria inconclusive at r={r}, mu3={mu3}")
    return FrontClass.REGULAR


def front_classify(r: float, mu3: float, tol: float = 1e-9) -> FrontPoint:
    closed = _classify_closed_form(r, mu3, tol)
    numeric = classify_front_numeric(r, mu3)
    if closed is not numeric:
        logger.warning(f"front classes disagree at ({r}, {mu3}): {closed.value} vs {numeric.value}")
    return FrontPoint(r=r, mu3=mu3, image=bs_surface(r, mu3), classification=closed)


# ============================================================================
# Radial potential
# ============================================================================

def potential(r: float, mu: Sequence[float]) -> float:
    mu1, mu2, mu3 = mu
    return 0.5 * mu1 * r**2 + 0.25 * mu2 * r**4 + mu3 * r**6 / 6.0 - r**8 / 8.0


def potential_derivatives(r: float, mu: Sequence[float]) -> list[float]:
    """v', v'', v''', v'''' at r."""
    mu1, mu2, mu3 = mu
    return [
        mu1 * r + mu2 * r**3 + mu3 * r**5 - r**7,
        mu1 + 3.0 * mu2 * r**2 + 5.0 * mu3 * r**4 - 7.0 * r**6,
        6.0 * mu2 * r + 20.0 * mu3 * r**3 - 42.0 * r**5,
        6.0 * mu2 + 60.0 * mu3 * r**2 - 210.0 * r**4,
    ]


def potential_degeneracy(r: float, mu: Sequence[float], tol: float = 1e-9) -> int:
    """Largest j with v' = ... = v^(j) = 0 at r."""
    level = 0
    for value in potential_derivatives(r, mu):
        if abs(value) >= tol:
            break
        level += 1
    return level


def normal_form_radial_rhs(r: float, mu: Sequence[float]) -> float:
    return potential_derivatives(r, mu)[0]


def _radial_factor(s: float, mu: Sequence[float]) -> float:
    """(dr/dt) / r written in s = r^2."""
    mu1, mu2, mu3 = mu
    return mu1 + mu2 * s + mu3 * s * s - s**3


def _root_clusters(mu: Sequence[float]) -> list[float]:
    """Positive roots in s, multiple roots merged."""
    mu1, mu2, mu3 = mu
    roots = np.roots([-1.0, mu3, mu2, mu1])
    positive = sorted(
        float(z.real) for z in roots
        if abs(z.imag) <= ROOT_MERGE_TOL * max(1.0, abs(z)) and z.real > 0.0
    )
    clusters: list[list[float]] = []
    for s in positive:
        if clusters and s - clusters[-1][-1] <= ROOT_MERGE_TOL * max(1.0, s):
            clusters[-1].append(s)
        else:
            clusters.append([s])
    return [float(np.mean(c)) for c in clusters]


def normal_form_portrait(mu: Sequence[float]) -> NormalFormPortrait:
    """
    Origin stability and the nested cycles of the Hopf normal form. A cycle's
    stability is read from the sign of dr/dt just inside and just outside it.
    """
    mu = tuple(float(v) for v in mu)
    roots = _root_clusters(mu)
    cycles = []
    for i, s in enumerate(roots):
        gaps = [s / 2.0, SIDE_STEP]
        if i > 0:
            gaps.append((s - roots[i - 1]) / 2.0)
        if i + 1 < len(roots):
            gaps.append((roots[i + 1] - s) / 2.0)
        step = min(gaps)
        inner, outer = _radial_factor(s - step, mu), _radial_factor(s + step, mu)
        if inner > 0.0 > outer:
            stability = CycleStability.STABLE
        elif inner < 0.0 < outer:
            stability = CycleStability.UNSTABLE
        else:
            stability = CycleStability.SEMI_STABLE
        cycles.append(NormalFormCycle(radius=math.sqrt(s), stability=stability))

    # first non-zero coefficient of (mu1, mu2, mu3, -1) fixes the origin
    leading = next(v for v in (*mu, -1.0) if v != 0.0)
    portrait = NormalFormPortrait(
        mu=mu, origin_stable=leading < 0.0, cycles=cycles, hopf=hopf_half_plane(mu)
    )
    logger.debug(f"normal form at mu={mu}: {[c.value for c in portrait.stability]}")
    return portrait


def swallowtail(u: float, v: float) -> Vector3:
    return (3.0 * u**4 + u * u * v, 4.0 * u**3 + 2.0 * u * v, v)


def hopf_half_plane(mu: Sequence[float]) -> Optional[CurveLabel]:
    """H- (supercritical) for mu1 = 0, mu2 < 0; H+ (subcritical) for mu1 = 0, mu2 > 0."""
    mu1, mu2, _ = mu
    if mu1 != 0.0 or mu2 == 0.0:
        return None
    return CurveLabel.H_MINUS if mu2 < 0.0 else CurveLabel.H_PLUS


def hopf_unfolding_surfaces(
    r_grid: Optional[Sequence[float]] = None,
    mu3_grid: Optional[Sequence[float]] = None,
    mu2_grid: Optional[Sequence[float]] = None,
    mesh: int = 50,
) -> list[CurveSample]:
    """H+ and H- half-planes, both halves of BS, the edge curve C and the swallowtail."""
    r_grid = np.linspace(0.0, 1.0, mesh) if r_grid is None else np.asarray(r_grid, dtype=float)
    mu3_grid = np.linspace(-1.0, 3.0, mesh) if mu3_grid is None else np.asarray(mu3_grid, dtype=float)
    mu2_grid = np.linspace(0.02, 1.0, mesh) if mu2_grid is None else np.asarray(mu2_grid, dtype=float)
    mu2_grid = np.abs(mu2_grid[mu2_grid != 0.0])

    def grid_sample(label, outer, inner, fn, parameterization, **metadata) -> CurveSample:
        points = [tuple(float(c) for c in fn(o, i)) for o in outer for i in inner]
        return CurveSample(
            label=label,
            points=points,
            parameterization=parameterization,
            triangles=triangulate(len(outer), len(inner)),
            metadata=metadata,
        )

    s_grid = -r_grid[::-1] ** 2
    u_grid = np.linspace(-1.0, 1.0, mesh)
    return [
        grid_sample(CurveLabel.H_PLUS, mu2_grid, mu3_grid, lambda m2, m3: (0.0, m2, m3),
                    "(mu2, mu3)", criticality="subcritical"),
        grid_sample(CurveLabel.H_MINUS, -mu2_grid, mu3_grid, lambda m2, m3: (0.0, m2, m3),
                    "(mu2, mu3)", criticality="supercritical"),
        grid_sample(CurveLabel.BS, r_grid, mu3_grid, bs_surface, "(r, mu3)", piece="s>=0"),
        grid_sample(CurveLabel.BS, s_grid, mu3_grid, bs_in_s, "(s, mu3)", piece="s<0"),
        CurveSample(label=CurveLabel.C, points=[curve_c(float(r)) for r in r_grid], parameterization="r"),
        grid_sample(CurveLabel.SWALLOWTAIL, u_grid, mu3_grid, swallowtail, "(u, v)"),
    ]
