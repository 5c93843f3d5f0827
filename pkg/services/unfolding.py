"""
Unfoldings of the Bogdanov-Takens points.

Codimension two: (c, n) = (c* + eps1, n* + eps2) is carried through the
chain of near-identity changes that brings the system at (x*, y*) to
    dx/dt = y,  dy/dt = mu1 + mu2 y + x^2 + x y (up to scaling),
giving mu1, mu2 as exact functions of eps.  Their 2-jets are read off
with jet arithmetic along three directions.

Codimension three: truncated asymptotic bifurcation surfaces in
(mu1, mu2, mu3) and the transversality determinant of the unfolding.
"""

import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np

from core.config import get_tolerances, get_unfolding_config
from core.exceptions import BifurcatoError, DegenerateUnfolding, NoRootInBracket, ZetaEtaZero
from models.critical import CriticalPoint
from models.geometry import BT2Jet, BT3Transversality, CurveLabel, CurveSample
from models.params import DimensionlessParams
from services import local_analysis
from services.bifurcation_geometry import triangulate
from services.model_core import jacobian
from utils.jets import Jet
from utils.numerics import bisect_root, sign_change_brackets

logger = logging.getLogger(__name__)

Scalar = Union[float, Jet]

HOMOCLINIC_FACTOR = 49.0 / 25.0
TRUNCATED = "truncated-asymptotic"


class ReducedCoefficients(NamedTuple):
    mu1: Scalar
    mu2: Scalar
    g3: Scalar
    g4: Scalar
    d4: Scalar


# ============================================================================
# Codimension two
# ============================================================================

def _incidence_taylor(params: DimensionlessParams, x: float) -> tuple[float, float, float]:
    """A(x*), A'(x*), A''(x*)/2 for A = x^3 / (1 + a x + b x^3)."""
    X = Jet.variable(x, 2)
    A = X**3 / (1.0 + params.a * X + params.b * X**3)
    return A[0], A[1], A[2]


def _reduce(params: DimensionlessParams, point: CriticalPoint, c: Scalar, n: Scalar) -> ReducedCoefficients:
    m = params.m
    x, y = point.x_star, point.y_star
    A0, A1, A2 = _incidence_taylor(params, x)

    level = 1.0 - c * (x + y)
    d1 = A0 * level - m * x
    d2 = A1 * level - c * A0 - m
    d3 = -c * A0
    d4 = A2 * level - c * A1
    d5 = -c * A1
    d6 = x - n * y
    d7 = -n

    e1 = -d1 * d7 + d3 * d6
    e2 = d3 - d2 * d7 + d5 * d6
    e3 = d2 + d7 - d1 * d5 / d3
    e4 = d5 - d4 * d7
    e5 = 2.0 * d4 - d2 * d5 / d3 + d1 * d5 * d5 / (d3 * d3)
    e6 = d5 / d3

    f1 = e1
    f2 = e2 - 2.0 * e1 * e6
    f3 = e3
    f4 = e4 - 2.0 * e2 * e6 + e1 * e6 * e6
    f5 = e5 - e3 * e6

    g1 = f1 - f2 * f2 / (4.0 * f4)
    g2 = f3 - f2 * f5 / (2.0 * f4)
    g3, g4 = f4, f5
    g4_sq = g4 * g4
    mu1 = g1 * g4_sq * g4_sq / (g3 * g3 * g3)
    mu2 = g2 * g4 / g3
    return ReducedCoefficients(mu1=mu1, mu2=mu2, g3=g3, g4=g4, d4=d4)


def bt2_base_params(params: DimensionlessParams, point: CriticalPoint) -> DimensionlessParams:
    return params.replace(c=point.c_star, n=point.n_star)


def bt2_mu(
    params: DimensionlessParams, point: CriticalPoint, eps1: float, eps2: float
) -> tuple[float, float]:
    """Exact (mu1, mu2) at c = c* + eps1, n = n* + eps2."""
    reduced = _reduce(params, point, point.c_star + eps1, point.n_star + eps2)
    return float(reduced.mu1), float(reduced.mu2)


def _directional(params: DimensionlessParams, point: CriticalPoint, u1: float, u2: float) -> ReducedCoefficients:
    c = Jet([point.c_star, u1], 2)
    n = Jet([point.n_star, u2], 2)
    return _reduce(params, point, c, n)


def bt2_jets(params: DimensionlessParams, point: CriticalPoint) -> BT2Jet:
    """
    r1..r5, s1..s5 with mu1 = r1 e1 + r2 e2 + r3 e1^2 + r4 e1 e2 + r5 e2^2 + ...
    and likewise mu2 with s.  Raises ZetaEtaZero when the cusp is degenerate.
    """
    base = _reduce(params, point, point.c_star, point.n_star)
    zeta = float(base.g3) / point.n_star
    eta = float(base.g4)
    tol = get_tolerances().CRITICAL_TOL
    if abs(zeta * eta) < tol:
        raise ZetaEtaZero(f"zeta * eta = {zeta * eta} vanishes", {"zeta": zeta, "eta": eta})

    along_c = _directional(params, point, 1.0, 0.0)
    along_n = _directional(params, point, 0.0, 1.0)
    diagonal = _directional(params, point, 1.0, 1.0)

    def coefficients(k: int) -> list[float]:
        e1, e2, both = (r[k] for r in (along_c, along_n, diagonal))
        return [e1[1], e2[1], e1[2], both[2] - e1[2] - e2[2], e2[2]]

    upsilon = -along_c.d4[1]
    jet = BT2Jet(r=coefficients(0), s=coefficients(1), upsilon=upsilon, zeta=zeta, eta=eta)
    logger.debug(f"bt2 jets r={jet.r} s={jet.s} det={jet.linear_determinant}")
    return jet


def bt2_linear_determinant(point: CriticalPoint, zeta: float, eta: float) -> float:
    x, n, c = point.x_star, point.n_star, point.c_star
    return (2 * n + 1) * x * eta**5 / (c * n * n * zeta**4)


def upsilon_closed_form(params: DimensionlessParams, point: CriticalPoint) -> float:
    a, b = params.a, params.b
    x, n = point.x_star, point.n_star
    D = 1 + a * x + b * x**3
    return x * x / (n * D**3) * (
        x * x * (3 * a * a * n + a * a)
        + x**4 * (-a * b * n - 3 * a * b)
        + x * (8 * a * n + 3 * a)
        + x**3 * (-3 * b * n - 6 * b)
        + 6 * n
        + 3
    )


def bt2_closed_form(params: DimensionlessParams, point: CriticalPoint, zeta: float, eta: float) -> BT2Jet:
    """The ten jet coefficients as rational functions of the critical point."""
    a, b = params.a, params.b
    x, n, c = point.x_star, point.n_star, point.c_star
    dd = 1 + a * x + b * x**3
    t = 2 * a * x + 3
    n2, n3, n4 = n * n, n**3, n**4
    ups = upsilon_closed_form(params, point)

    r1 = -(n + 1) * x * eta**4 / (c * n * zeta**3)
    r2 = x * eta**4 / (n2 * zeta**3)
    s1 = eta * (eta * x * (-2 - a * x + b * x**3) + t * (n2 - eta * n * x)) / (2 * c * zeta**2 * x * dd)
    s2 = eta * (eta * x * (eta - 2 * zeta) - n * (2 * zeta + eta)) / (2 * zeta**2 * n2)

    r3 = eta**3 / (4 * c * c * zeta**4 * n2 * dd**2) * (
        (
            n2 * (
                eta * (43 * a * a * x * x - 2 * a * x * (b * x**3 - 65) - b * b * x**6 - 2 * b * x**3 + 98)
                + 4 * c * ups * x * (8 * zeta - 3 * eta) * dd**2
            )
            + n4 * (
                -(32 * zeta * t * dd - eta * (95 * a * a * x * x + 10 * a * x * (5 * b * x**3 + 26) - b * b * x**6 + 76 * b * x**3 + 176))
            )
        )
        + 2 * c * n * x * (2 * ups * (8 * zeta - 3 * eta) * dd**2 + eta * x * x * (13 * a * x - b * x**3 + 20))
        - 2 * n3 * t * (16 * zeta * dd - eta * (35 * a * x + 13 * b * x**3 + 46))
        + 14 * c * eta * x**3 * t
    )
    r4 = eta**3 / (2 * c * zeta**4 * n3 * dd**3) * (
        -c * eta * x * dd * (
            x * x * (2 * n * (a * a * ups + 19) + 63)
            + 4 * a * b * ups * n * x**4
            + x**3 * (a * (25 * n + 42) + 4 * b * ups * n)
            + 4 * a * ups * n * x
            + 2 * b * b * ups * n * x**6
            - b * n * x**5
            + 2 * ups * n
        )
        + c * t * (
            4 * n2 * (
                x * x * (2 * a * a * ups + 3) + 4 * a * b * ups * x**4 + 2 * x**3 * (a + 2 * b * ups)
                + 4 * a * ups * x + 2 * b * b * ups * x**6 + 2 * ups
            )
            + n * x * x * (a * x * (8 - 27 * eta * x) - 5 * b * eta * x**4 - 38 * eta * x + 12)
            - 11 * eta * x**3 * t
        )
        + eta * n * dd**3 * (2 * eta * n * x + n + 3 * eta * x)
        - 8 * c * n2 * x * x * t * t
    )
    r5 = -(eta**3) / (4 * zeta**4 * x * n4 * dd**2) * (
        eta * n * x * dd**2 * (n + 6 * eta * x) - 28 * c * eta * x**4 * t + n2 * t * t * (8 * n - 11 * eta * x)
    )
    s3 = t / (2 * c * zeta**3 * n * dd**4) * (
        (eta * (n * x * (3 * a * x - b * x**3 + 5) + 2 * x * (a * x - b * x**3 + 2)) - n2 * t)
        * (-c * ups * x * dd + eta * (n * x + x) * (3 * a * x + b * x**3 + 4) + n2 * t)
    )
    s4 = -1 / (4 * c * zeta**3 * n4 * dd**4) * (
        -c * n2 * x * t * t * (
            c * (2 * ups * n * dd + eta * x * (4 * a * ups * x + 4 * b * ups * x**3 + 4 * ups + 7 * x * x))
            - 2 * eta * eta * x * (n * (9 * a * x + b * x**3 + 13) + 8 * a * x + 12)
        )
        + c * c * eta * x * x * t * (
            6 * ups * n2 * dd**2
            + n * x * x * (2 * a * x * (4 - 3 * eta * x) - 8 * b * eta * x**4 - 5 * eta * x + 12)
            + 2 * eta * x**3 * t
        )
        - c * eta * eta * n * x * x * t * dd**2 * (n * (eta * x + 14) + 2 * eta * x)
        + 2 * eta**3 * n3 * dd**4
        + c * n4 * t**3 * (3 * n + 2 * eta * x)
    )
    s5 = 1 / (4 * zeta**3 * n4 * dd**4) * (
        -c * eta**2 * x * x * t * dd**2 * (13 * n + 2 * eta * x)
        + c * eta * n * x * t * t * dd * (7 * n + 2 * eta * x)
        + 3 * eta**3 * n2 * dd**4
        - c * n * t**3 * (n2 - 4 * eta**2 * x * x)
    )
    return BT2Jet(r=[r1, r2, r3, r4, r5], s=[s1, s2, s3, s4, s5], upsilon=ups, zeta=zeta, eta=eta)


def _curve_points(
    jet: BT2Jet,
    eps1_grid: Sequence[float],
    factor: Optional[float],
    label_for: Callable[[float], Optional[CurveLabel]],
) -> dict[CurveLabel, CurveSample]:
    """Solve mu1 + factor * mu2^2 = 0 (factor None: mu1 = 0) for eps2 per eps1."""
    config = get_unfolding_config()
    scan = np.arange(-config.EPS_BRACKET, config.EPS_BRACKET + config.SCAN_STEP / 2, config.SCAN_STEP)
    r1, r2 = jet.r[0], jet.r[1]
    samples: dict[CurveLabel, CurveSample] = {}

    for e1 in eps1_grid:
        label = label_for(e1)
        if label is None:
            continue
        sample = samples.setdefault(label, CurveSample(label=label, parameterization="eps1 -> eps2"))

        def equation(e2: float, e1: float = e1) -> float:
            value = jet.mu1(e1, e2)
            return value if factor is None else value + factor * jet.mu2(e1, e2) ** 2

        roots = [
            bisect_root(equation, lo, hi, config.BISECT_WIDTH)
            for lo, hi in sign_change_brackets(equation, scan)
        ]
        if factor is not None:
            roots = [e2 for e2 in roots if jet.mu2(e1, e2) > 0.0]
        if not roots:
            sample.skipped.append(float(e1))
            logger.debug(f"{label.value}: no root at eps1={e1}")
            continue
        prediction = -r1 * e1 / r2
        e2 = min(roots, key=lambda root: abs(root - prediction))
        sample.points.append((float(e1), float(e2)))
    return samples


def bt2_curves(jet: BT2Jet, eps1_grid: Optional[Sequence[float]] = None) -> list[CurveSample]:
    """
    Saddle-node (split by the sign of eps1), Hopf and homoclinic curves of the
    2-jet in the (eps1, eps2) plane.  Grid values without a root are recorded
    in ``skipped``.
    """
    config = get_unfolding_config()
    if eps1_grid is None:
        eps1_grid = np.linspace(-config.EPS1_RANGE, config.EPS1_RANGE, config.MESH + 1)

    def saddle_node_label(e1: float) -> Optional[CurveLabel]:
        if e1 < 0.0:
            return CurveLabel.SN_PLUS
        if e1 > 0.0:
            return CurveLabel.SN_MINUS
        return None

    curves = _curve_points(jet, eps1_grid, None, saddle_node_label)
    curves.update(_curve_points(jet, eps1_grid, 1.0, lambda e1: CurveLabel.HOPF))
    curves.update(_curve_points(jet, eps1_grid, HOMOCLINIC_FACTOR, lambda e1: CurveLabel.HOMOCLINIC))

    result = []
    for label in (CurveLabel.SN_PLUS, CurveLabel.SN_MINUS, CurveLabel.HOPF, CurveLabel.HOMOCLINIC):
        if label in curves:
            sample = curves[label]
            if sample.skipped:
                logger.warning(f"{label.value}: {len(sample.skipped)} grid points without a root")
            sample.metadata["jet"] = "2-jet"
            result.append(sample)
    return result


def curve_residual(jet: BT2Jet, label: CurveLabel, e1: float, e2: float) -> float:
    factor = {CurveLabel.HOPF: 1.0, CurveLabel.HOMOCLINIC: HOMOCLINIC_FACTOR}.get(label, 0.0)
    return jet.mu1(e1, e2) + factor * jet.mu2(e1, e2) ** 2


def solve_curve_at(jet: BT2Jet, label: CurveLabel, e1: float) -> float:
    """eps2 of one curve at a single eps1; NoRootInBracket when there is none."""
    factor = {CurveLabel.HOPF: 1.0, CurveLabel.HOMOCLINIC: HOMOCLINIC_FACTOR}.get(label)
    samples = _curve_points(jet, [e1], factor, lambda _: label)
    points = samples[label].points
    if not points:
        raise NoRootInBracket(f"no {label.value} point at eps1={e1}", {"eps1": e1})
    return points[0][1]


def upper_trace(params: DimensionlessParams) -> float:
    """Trace of the Jacobian at E2, NaN when E2 does not exist."""
    e2 = local_analysis.upper_equilibrium(params)
    if e2 is None:
        return math.nan
    return float(np.trace(jacobian((e2.x, e2.y), params)))


def hopf_crossing(
    params: DimensionlessParams, point: CriticalPoint, e1: float, near: Optional[float] = None
) -> float:
    """
    eps2 where the trace at E2 of the full system changes sign along
    (c, n) = (c* + e1, n* + eps2), the root closest to ``near`` when several
    are found.
    """
    config = get_unfolding_config()
    scan = np.arange(-config.EPS_BRACKET, config.EPS_BRACKET + config.SCAN_STEP / 2, config.SCAN_STEP)
    scan = scan[point.n_star + scan > 0.0]

    def trace(e2: float) -> float:
        try:
            return upper_trace(params.replace(c=point.c_star + e1, n=point.n_star + e2))
        except BifurcatoError as e:
            logger.debug(f"no trace at eps2={e2}: {e}")
            return math.nan

    roots = [
        bisect_root(trace, lo, hi, config.BISECT_WIDTH) for lo, hi in sign_change_brackets(trace, scan)
    ]
    if not roots:
        raise NoRootInBracket(f"trace at E2 keeps its sign at eps1={e1}", {"eps1": e1})
    if near is None:
        return roots[0]
    return min(roots, key=lambda root: abs(root - near))


# ============================================================================
# Codimension three surfaces
# ============================================================================

def hopf_surface(mu1: float, mu3: float) -> float:
    """mu2 on the Hopf surface, mu1 <= 0."""
    s = math.sqrt(-mu1)
    return mu3 * s + s**3


def homoclinic_surface(mu1: float, mu3: float) -> float:
    s = math.sqrt(-mu1)
    return 5.0 / 7.0 * mu3 * s + 103.0 / 77.0 * s**3


def tangency_homoclinic(u: float) -> tuple[float, float, float]:
    return (-u * u, 4.0 * u**3, 3.0 * u)


def tangency_hopf(u: float) -> tuple[float, float, float]:
    return (-u * u, -4.0 * u**3 / 11.0, -15.0 * u / 11.0)


def snlc_surface(u: float, v: float) -> tuple[float, float, float]:
    """Cubic Hermite blend from the Hopf tangency (v = 0) to the homoclinic tangency (v = 1)."""
    h00 = 2 * v**3 - 3 * v**2 + 1
    h01 = -2 * v**3 + 3 * v**2
    hopf, hom = tangency_hopf(u), tangency_homoclinic(u)
    return tuple(h00 * p + h01 * q for p, q in zip(hopf, hom))


def snlc_surface_printed(u: float, v: float) -> tuple[float, float, float]:
    """The surface with its second and third coordinates grouped as printed."""
    return (
        -u * u,
        (u / 11.0) * (u * u * (74 * v**3 - 111 * v**2 + 33) + 3025 * (v - 1) * v * v),
        (v * v / 55.0) * (241 * u * u * (2 * v - 3) + 21175 * (v - 1)) + 2 * u * u,
    )


def _surface_sample(label: CurveLabel, rows: int, cols: int, points: list, parameterization: str) -> CurveSample:
    return CurveSample(
        label=label,
        points=points,
        parameterization=parameterization,
        triangles=triangulate(rows, cols),
        metadata={"truncation": TRUNCATED, "grid": [rows, cols]},
    )


def bt3_surfaces(
    u_grid: Optional[Sequence[float]] = None,
    v_grid: Optional[Sequence[float]] = None,
    mu1_grid: Optional[Sequence[float]] = None,
    mu3_grid: Optional[Sequence[float]] = None,
) -> list[CurveSample]:
    """Hopf, homoclinic and SNlc surfaces with both tangency curves, in (mu1, mu2, mu3)."""
    mesh = get_unfolding_config().MESH
    u_grid = np.linspace(-1.0, 1.0, mesh) if u_grid is None else np.asarray(u_grid, dtype=float)
    v_grid = np.linspace(0.0, 1.0, mesh) if v_grid is None else np.asarray(v_grid, dtype=float)
    mu1_grid = np.linspace(-1.0, 0.0, mesh) if mu1_grid is None else np.asarray(mu1_grid, dtype=float)
    mu3_grid = np.linspace(-1.0, 1.0, mesh) if mu3_grid is None else np.asarray(mu3_grid, dtype=float)
    if np.any(mu1_grid > 0.0):
        logger.warning("mu1 > 0 values dropped; the surfaces live in mu1 <= 0")
        mu1_grid = mu1_grid[mu1_grid <= 0.0]

    def over_mu(fn) -> list[tuple[float, float, float]]:
        return [(float(m1), float(fn(m1, m3)), float(m3)) for m1 in mu1_grid for m3 in mu3_grid]

    rows, cols = len(mu1_grid), len(mu3_grid)
    samples = [
        _surface_sample(CurveLabel.HOPF_SURFACE, rows, cols, over_mu(hopf_surface), "(mu1, mu3)"),
        _surface_sample(CurveLabel.HOMOCLINIC_SURFACE, rows, cols, over_mu(homoclinic_surface), "(mu1, mu3)"),
        _surface_sample(
            CurveLabel.SNLC, len(u_grid), len(v_grid),
            [tuple(map(float, snlc_surface(u, v))) for u in u_grid for v in v_grid], "(u, v)",
        ),
        _surface_sample(
            CurveLabel.SNLC_PRINTED, len(u_grid), len(v_grid),
            [tuple(map(float, snlc_surface_printed(u, v))) for u in u_grid for v in v_grid], "(u, v)",
        ),
        CurveSample(
            label=CurveLabel.TANGENCY_HOM,
            points=[tuple(map(float, tangency_homoclinic(u))) for u in u_grid],
            parameterization="u",
        ),
        CurveSample(
            label=CurveLabel.TANGENCY_HOPF,
            points=[tuple(map(float, tangency_hopf(u))) for u in u_grid],
            parameterization="u",
        ),
    ]
    return samples


# ============================================================================
# Codimension three transversality
# ============================================================================

def bt3_nondegeneracy(v: float, D: float) -> float:
    return (
        12 * (v + 1) * (2 * v + 3) ** 4
        + 3 * v * D**4
        - 3 * v * D**3
        + (2 * v + 3) ** 2 * (32 * v + 69) * D * D
        - (2 * v + 3) ** 2 * (82 * v * v + 240 * v + 171) * D
    )


class BT3Alpha(NamedTuple):
    a00: Scalar
    a10: Scalar
    a20: Scalar
    a30: Scalar
    a40: Scalar
    a01: Scalar
    a11: Scalar
    a21: Scalar
    a31: Scalar


def _bt3_alpha(params: DimensionlessParams, x: float, e1: Scalar, e2: Scalar, e3: Scalar) -> BT3Alpha:
    """
    Coefficients of dy/dt = sum alpha_ij x^i y^j after moving the
    codimension-3 point to the origin, linear in (e1, e2, e3) for
    (c, n, b) = (c* + e1, n* + e2, b* + e3).
    """
    a, b, c, m, n = params.as_tuple()
    v = a * x
    D = 1 + a * x + b * x**3
    t = 2 * v + 3

    a00 = e2 * n * x - e1 * t * t * m * m * (n + 1) / D
    a10 = e2 * n * (2 * v + D + 3) / D - e1 * t * t * m * m * (n + 1) * (2 * v + D + 3) / (D * x)
    a20 = (
        e1 * t * m * (n + 1) * ((v + 3) * D - t * t) / D**3
        + (v + 3) * t * m * m * n * e3 / D**2
        - e2 * ((v + 3) * D * (m + n) - t * t * n) / (D * D * x)
        - (v + 3) * m * n / (D * x)
    )
    a30 = (
        m * n * x * e3 * (2 * (v + 3) * t - (v + 4) * D) / D**3
        + n * ((v + 4) * D - (v + 3) * t) / (t * D * D)
        - (n + 1) * x * e1 * ((v + 4) * D * D - t * (4 * v + 9) * D + 2 * v * t * (4 * m + 9) + 27) / D**4
        + e2 / (D * D * m * m * (n + 1) * (m + n * n + n)) * (
            m**3 * (-12 * v + 6 * D + n - 17)
            - m * m * n * (n + 1) * (2 * v - 6 * D + (v + 3) * n + 5)
            - 3 * m * n * n * (n + 1) ** 2
            + t * n**3 * (n + 1) ** 3
        )
    )
    a40 = (
        -n / (t * D**3 * x) * ((v + 3) * t * t + (v + 5) * D * D - (5 * v * v + 26 * v + 30) * D)
        + m * n * e3 / D**4 * (3 * (v + 3) * t * t + (v + 5) * D * D - 2 * (5 * v * v + 26 * v + 30) * D)
        + (n + 1) * e1 / D**5 * (
            -(t**4) + (v + 5) * D**3 - (13 * v * v + 58 * v + 60) * D * D + (7 * v + 15) * t * t * D
        )
        - n * e2 / (2 * (v + 3) * D * D * m * m * (n + 1) * x) * (
            m * (
                39 * v * v + 118 * v + 10 * D * D
                + D * (-40 * v + (v + 5) * n - 61)
                - (3 * v * v + 17 * v + 21) * n + 87
            )
            + n * (n + 1) * (10 * D * D - (25 * v + 46) * D - t * ((v + 3) * n - 3 * (v + 2)))
        )
    )
    a01 = -(n**3) * e3 / c - n * n * e1 / c - e2
    a11 = -e1 * t * t * m / (D * D) - 2 * t * m * m * e3 * (6 * (v + 1) * t - (11 * v + 15) * D) / D**3
    a21 = (
        (t**3 + 3 * D * D * (2 * (v + 3) + (v + 4) * n) - t * D * (7 * v + 2 * (v + 3) * n + 15))
        / (t * D**3 * (n + 1))
        - m * x * e3 / (D**4 * (n + 1)) * (
            3 * t**3 + 3 * D * D * (3 * v + (v + 4) * n + 8) - t * D * (16 * v + 4 * (v + 3) * n + 33)
        )
        + x * e1 * (3 * (v + 2) * D - t * t) / D**3
    )
    a31 = (
        (
            t**4
            - 2 * D**3 * (4 * v + 2 * (v + 5) * n + 15)
            + D * D * (32 * v * v + 137 * v + 3 * (4 * v * v + 21 * v + 24) * n + 138)
            - t * t * D * (10 * v + 2 * (v + 3) * n + 21)
        ) / (t * D**4 * (n + 1) * x)
        + 2 * m * e3 / (D**5 * (n + 1)) * (
            -2 * t**4
            + 2 * D**3 * (3 * v + (v + 5) * n + 10)
            - D * D * (2 * (19 * v * v + 79 * v + 78) + 3 * (4 * v * v + 21 * v + 24) * n)
            + t * t * D * (16 * v + 3 * (v + 3) * n + 33)
        )
        + e1 / (D**5 * n) * (
            2 * D**3 * (10 * (v + 3) + (8 * v + 25) * n)
            - 2 * D * D * (2 * (5 * v + 8) * (5 * v + 12) + (44 * v * v + 179 * v + 174) * n)
            + t * t * D * (36 * (v + 2) + (34 * v + 69) * n)
            - 4 * t**4 * (n + 1)
        )
    )
    return BT3Alpha(a00, a10, a20, a30, a40, a01, a11, a21, a31)


def _bt3_nu(alpha: BT3Alpha) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    """nu00, nu01, nu11, nu31 of dy/dt = nu00 + x^2 + y (nu01 + nu11 x + nu31 x^3) + ..."""
    a00, a10, a20, a30, a40, a01, a11, a21, a31 = alpha
    b00 = a00
    b10 = (2 * a10 * a20 - a30 * a00) / (2 * a20)
    b20 = (80 * a20**3 - 60 * a10 * a30 * a20 - 48 * a40 * a20 * a00 + 45 * a30**2 * a00) / (80 * a20**2)
    b01 = a01
    b11 = (2 * a11 * a20 - a30 * a01) / (2 * a20)
    b21 = (
        80 * a21 * a20**2 - 60 * a11 * a30 * a20 - 48 * a40 * a20 * a01 + 45 * a30**2 * a01
    ) / (80 * a20**2)
    b31 = (
        240 * a31 * a20**3 - 240 * a21 * a30 * a20**2 - 192 * a11 * a40 * a20**2
        + 210 * a11 * a30**2 * a20 + 336 * a30 * a40 * a20 * a01 - 175 * a30**3 * a01
    ) / (240 * a20**3)

    minus_b20 = -b20
    if (minus_b20.value if isinstance(minus_b20, Jet) else minus_b20) <= 0.0:
        raise DegenerateUnfolding("quadratic coefficient has the wrong sign for the rescaling")
    s = minus_b20.sqrt() if isinstance(minus_b20, Jet) else math.sqrt(minus_b20)
    g00 = (4 * b20 * b00 - b10**2) / (4 * b20**2)
    g01 = -s * (-b31 * b10**3 + 2 * b20 * b21 * b10**2 - 4 * b11 * b20**2 * b10 + 8 * b20**3 * b01) / (8 * b20**4)
    g11 = -s * (3 * b31 * b10**2 - 4 * b20 * b21 * b10 + 4 * b11 * b20**2) / (4 * b20**3)
    g21 = -s * (2 * b20 * b21 - 3 * b10 * b31) / (2 * b20**2)
    g31 = -s * b31 / b20
    return g00, g01 - g00 * g21, g11, g31


def _fifth_root(value: float) -> float:
    return math.copysign(abs(value) ** 0.2, value)


def bt3_mu(
    params: DimensionlessParams, x: float, eps: Sequence[float]
) -> tuple[float, float, float]:
    """(mu1, mu2, mu3) at (c, n, b) = (c*, n*, b*) + eps, with the alphas linear in eps."""
    nu00, nu01, nu11, nu31 = _bt3_nu(_bt3_alpha(params, x, *[float(e) for e in eps]))
    root = _fifth_root(nu31)
    return root**4 * nu00, root * nu01, nu11 / root


def bt3_unfolding_jacobian(
    params: DimensionlessParams, x: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    d(mu1, mu2, mu3)/d(eps1, eps2, eps3) at eps = 0 by order-1 jets along each
    axis, with the unscaled d(nu00, nu01, nu11) rows and varsigma = nu31(0).
    """
    raw = np.zeros((3, 3))
    scaled = np.zeros((3, 3))
    powers = (4, 1, -1)
    varsigma = 0.0
    for j in range(3):
        eps = [Jet([0.0, 1.0 if k == j else 0.0], 1) for k in range(3)]
        nu = _bt3_nu(_bt3_alpha(params, x, *eps))
        varsigma = nu[3].value
        root = _fifth_root(varsigma)
        for i, k in enumerate(powers):
            factor = root**k
            raw[i, j] = nu[i][1]
            # product rule on varsigma^(k/5) * nu_i
            scaled[i, j] = factor * nu[i][1] + k * factor / (5.0 * varsigma) * nu[i].value * nu[3][1]
    return scaled, raw, varsigma


def bt3_closed_form_rows(params: DimensionlessParams, x: float) -> list[list[float]]:
    """
    Closed-form d(nu00, nu01, nu11)/d(eps) rows; the middle entry of the last
    row has no closed form here and comes back as NaN.
    """
    a, b, c, m, n = params.as_tuple()
    v = a * x
    D = 1 + a * x + b * x**3
    t = 2 * v + 3
    w = (v + 3) * m * n / (D * x)
    Q = t**3 + 3 * D * D * (2 * (v + 3) + (v + 4) * n) - t * D * (7 * v + 2 * (v + 3) * n + 15)
    row1 = [t * t * m * (n + 1) * x / ((v + 3) * n), -D * x * x / (m * (v + 3)), 0.0]
    row2 = [
        -m * (c * t * m * x * Q + (v + 3) * D**3 * n**3) / (c * D**4 * x * w**1.5),
        n * (x * x * Q - (2 * v * v + 9 * v + 9) * D * D * m * (n + 1)) / (t * D**3 * (n + 1) * x * w**1.5),
        -(n**3) / (c * math.sqrt(w)),
    ]
    row3 = [
        -m * n / (2 * c * t * D**6 * x * x * w**2.5) * (
            (v + 3) * D * D * (
                2 * c * (v + 3) * t**3 * m * m * n + D * n**3 * x * ((v + 4) * D - (v + 3) * t)
            )
            + c * t * m * Q * (2 * (v + 3) * t * D * m * (2 * v + D + 3) + x * x * ((v + 4) * D - (v + 3) * t))
        ),
        math.nan,
        -n / (2 * c * t * D**4 * x * w**1.5) * (
            4 * c * (v + 3) * t * t * m**3 * (6 * (2 * v * v + 5 * v + 3) - (11 * v + 15) * D)
            + D * D * n**3 * x * (-2 * v * v - 9 * v + (v + 4) * D - 9)
        ),
    ]
    return [row1, row2, row3]


def bt3_transversality(
    params: DimensionlessParams, x: float, tol: Optional[float] = None
) -> BT3Transversality:
    """
    Transversality of (c, n, b) -> (mu1, mu2, mu3) at a codimension-3 point.

    Reports the closed-form determinant next to the determinant of the
    Jacobian of the full reduction chain; DegenerateUnfolding when the
    nondegeneracy polynomial vanishes relative to its largest term.
    """
    tol = get_tolerances().CRITICAL_TOL if tol is None else tol
    a, b, c, m, n = params.as_tuple()
    v = a * x
    D = 1 + a * x + b * x**3
    t = 2 * v + 3

    poly = bt3_nondegeneracy(v, D)
    scale = max(
        abs(12 * (v + 1) * t**4), abs(3 * v * D**4), abs(t * t * (32 * v + 69) * D * D),
        abs(t * t * (82 * v * v + 240 * v + 171) * D), 1e-300,
    )
    if abs(poly) < tol * scale:
        raise DegenerateUnfolding(f"nondegeneracy polynomial {poly} vanishes", {"value": poly})

    radicand = t * (t * t - (4 * v + 9) * D) ** 2 / ((v + 3) ** 2 * D**3 * x)
    varsigma = -2 * math.sqrt(2) * v * (5 * v + 12) / ((v + 3) * t * t * D * x * math.sqrt(radicand))
    determinant = (
        abs(varsigma) ** 0.8 * t**6 * (t * t - (4 * v + 9) * D) / (16 * (v + 3) ** 7 * D**4) * poly
    )

    matrix, raw, chain_varsigma = bt3_unfolding_jacobian(params, x)
    matrix_determinant = float(np.linalg.det(matrix))
    if not math.isclose(chain_varsigma, varsigma, rel_tol=1e-6):
        logger.warning(f"varsigma {varsigma:.10g} differs from the chain's {chain_varsigma:.10g}")
    signs_agree = (determinant > 0) == (matrix_determinant > 0)
    if not signs_agree:
        logger.warning(
            f"transversality determinants disagree in sign ({determinant:.6g} vs {matrix_determinant:.6g})"
        )
    return BT3Transversality(
        nondegeneracy=poly,
        determinant=determinant,
        matrix_determinant=matrix_determinant,
        varsigma=varsigma,
        signs_agree=signs_agree,
        matrix=matrix.tolist(),
        unscaled_rows=raw.tolist(),
    )
