"""
Trajectories, section return maps and limit cycles of the reduced system.

Cycles around the upper equilibrium E2 are anchored on the ray
{y = y2, x > x2}.  Forward-time orbits cross it upwards (dy/dt = x - x2 > 0
there), so a return is the next upward crossing after leaving the section.
"""

import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from core.config import get_integrator_config
from core.exceptions import (
    BifurcatoError,
    ConvergedToEquilibrium,
    NoReturn,
    NonFiniteState,
    StepSizeUnderflow,
)
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
from models.params import DimensionlessParams
from services.equilibria import positive_equilibria
from services.local_analysis import upper_equilibrium
from utils.numerics import bisect_root, parallel_map, sign_change_brackets

logger = logging.getLogger(__name__)

# Time spent leaving the section before crossings are watched
_SECTION_LEAVE_TIME = 1e-6


def _rhs(params: DimensionlessParams, direction: Direction = Direction.FORWARD) -> Callable:
    a, b, c, m, n = params.as_tuple()
    sign = direction.sign

    def field(t: float, s: np.ndarray) -> list[float]:
        x, y = s
        D = 1.0 + a * x + b * x**3
        return [sign * (x**3 * (1.0 - c * x - c * y) / D - m * x), sign * (x - n * y)]

    return field


def in_trapping_region(state: Sequence[float], params: DimensionlessParams, slack: float = 0.0) -> bool:
    x, y = state
    return x >= -slack and y >= -slack and x + y <= 1.0 / params.c + slack


def _check_solution(sol) -> None:
    if sol.status == -1:
        message = str(sol.message)
        if "step size" in message.lower():
            raise StepSizeUnderflow(message, {"t": float(sol.t[-1])})
        raise NonFiniteState(message, {"t": float(sol.t[-1])})
    if not np.all(np.isfinite(sol.y)):
        raise NonFiniteState("integration produced non-finite values")


def integrate(
    s0: Sequence[float],
    params: DimensionlessParams,
    t_end: float,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    samples: Optional[int] = None,
    direction: Direction = Direction.FORWARD,
    method: Optional[str] = None,
) -> Trajectory:
    """
    Integrate from s0 over [0, t_end] with an embedded Runge-Kutta 5(4) pair.

    With ``samples`` the dense output is sampled uniformly; otherwise the
    accepted step points are returned.
    """
    config = get_integrator_config()
    rtol = config.RTOL if rtol is None else rtol
    atol = config.ATOL if atol is None else atol
    method = config.METHOD if method is None else method
    s0 = [float(s0[0]), float(s0[1])]
    if not in_trapping_region(s0, params):
        logger.warning(f"start {s0} lies outside the trapping region")

    t_eval = np.linspace(0.0, t_end, samples) if samples else None
    sol = solve_ivp(
        _rhs(params, direction), (0.0, t_end), s0,
        method=method, rtol=rtol, atol=atol, t_eval=t_eval,
    )
    _check_solution(sol)
    stats = IntegratorStats(
        steps=max(len(sol.t) - 1, 0) if t_eval is None else 0,
        function_evals=int(sol.nfev),
    )
    return Trajectory(t=sol.t.tolist(), x=sol.y[0].tolist(), y=sol.y[1].tolist(), stats=stats)


# ============================================================================
# Return map
# ============================================================================

def poincare_return(
    x0: float,
    params: DimensionlessParams,
    direction: Direction = Direction.FORWARD,
    e2: Optional[tuple[float, float]] = None,
    t_max: Optional[float] = None,
) -> ReturnResult:
    """
    First return of (x0, y2) to the section in the given time direction.

    Raises NoReturn when the orbit leaves the trapping region or runs out of
    time, ConvergedToEquilibrium when it falls onto E2.
    """
    config = get_integrator_config()
    t_max = config.T_MAX_RETURN if t_max is None else t_max
    if e2 is None:
        upper = upper_equilibrium(params)
        if upper is None:
            raise NoReturn("no upper equilibrium to return around")
        e2 = (upper.x, upper.y)
    x2, y2 = e2
    if x0 <= x2:
        raise NoReturn(f"x0={x0} is not on the section x > x2={x2}", {"x0": x0, "x2": x2})

    field = _rhs(params, direction)
    options = dict(method=config.METHOD, rtol=config.RTOL, atol=config.ATOL)
    leave = solve_ivp(field, (0.0, _SECTION_LEAVE_TIME), [x0, y2], **options)
    _check_solution(leave)

    def crossing(t, s):
        return s[1] - y2

    crossing.terminal = True
    crossing.direction = 1.0 if direction is Direction.FORWARD else -1.0

    scale = max(1.0, abs(x2), abs(y2))

    def approach(t, s):
        return math.hypot(s[0] - x2, s[1] - y2) - 1e-10 * scale

    approach.terminal = True
    approach.direction = -1.0

    # x + y <= 1/c is forward invariant only for m >= 1
    bound = 1.0 / params.c if params.m >= 1.0 else math.inf

    def escape(t, s):
        return min(s[0], bound - s[0] - s[1]) + 1e-9 * scale

    escape.terminal = True
    escape.direction = -1.0

    def extinction(t, s):
        return math.hypot(s[0], s[1]) - 1e-8 * scale

    extinction.terminal = True
    extinction.direction = -1.0

    sol = solve_ivp(
        field, (leave.t[-1], t_max), leave.y[:, -1],
        events=(crossing, approach, escape, extinction), **options,
    )
    _check_solution(sol)
    if sol.t_events[0].size:
        x1 = float(sol.y_events[0][0][0])
        return ReturnResult(x1=x1, period=float(sol.t_events[0][0]))
    if sol.t_events[1].size:
        raise ConvergedToEquilibrium(f"orbit from x0={x0} converged to E2", {"x0": x0})
    raise NoReturn(f"orbit from x0={x0} did not return by t={sol.t[-1]:.6g}", {"x0": x0})


def displacement(
    x0: float, params: DimensionlessParams, direction: Direction, e2: tuple[float, float]
) -> float:
    """P(x0) - x0, NaN where the return does not exist."""
    try:
        return poincare_return(x0, params, direction, e2).x1 - x0
    except BifurcatoError as e:
        logger.debug(f"no return from {x0} ({direction.value}): {e}")
        return math.nan


# ============================================================================
# Limit cycles
# ============================================================================

def winding_number(loop_x: Sequence[float], loop_y: Sequence[float], center: Sequence[float]) -> int:
    """Turns of the closed polyline around ``center``."""
    angles = np.unwrap(np.arctan2(np.asarray(loop_y) - center[1], np.asarray(loop_x) - center[0]))
    closing = math.atan2(loop_y[0] - center[1], loop_x[0] - center[0]) - math.atan2(
        loop_y[-1] - center[1], loop_x[-1] - center[0]
    )
    closing = (closing + math.pi) % (2.0 * math.pi) - math.pi
    return int(round((angles[-1] - angles[0] + closing) / (2.0 * math.pi)))


def _return_slope(x0: float, params: DimensionlessParams, e2: tuple[float, float]) -> float:
    h = 1e-6 * max(1.0, abs(x0))
    plus = poincare_return(x0 + h, params, Direction.FORWARD, e2).x1
    minus = poincare_return(x0 - h, params, Direction.FORWARD, e2).x1
    return (plus - minus) / (2.0 * h)


def _slope_stability(slope: float) -> CycleStability:
    return CycleStability.STABLE if slope < 1.0 else CycleStability.UNSTABLE


def _side_stability(inner: float, outer: float, slope: float) -> CycleStability:
    """Forward displacement signs on either side of a cycle whose slope is near 1."""
    if not (math.isfinite(inner) and math.isfinite(outer)):
        return _slope_stability(slope)
    if inner > 0.0 > outer:
        return CycleStability.STABLE
    if inner < 0.0 < outer:
        return CycleStability.UNSTABLE
    return CycleStability.SEMI_STABLE


def _build_cycle(
    x0: float,
    params: DimensionlessParams,
    e2: tuple[float, float],
    found: Direction,
    side_step: float,
) -> LimitCycle:
    """
    Stability from the return-map slope; when the slope is within
    SEMISTABLE_SLOPE_TOL of 1 the forward displacement ``side_step`` inside
    and outside the cycle decides, and equal signs mean semi-stable.
    """
    config = get_integrator_config()
    first = poincare_return(x0, params, Direction.FORWARD, e2)
    slope = _return_slope(x0, params, e2)
    sides: list[float] = []
    if abs(slope - 1.0) >= config.SEMISTABLE_SLOPE_TOL:
        stability = _slope_stability(slope)
    else:
        inner_x = max(x0 - side_step, 0.5 * (x0 + e2[0]))
        sides = [
            displacement(inner_x, params, Direction.FORWARD, e2),
            displacement(x0 + side_step, params, Direction.FORWARD, e2),
        ]
        stability = _side_stability(sides[0], sides[1], slope)
        logger.debug(f"cycle at x0={x0}: slope {slope:.8f}, side displacements {sides}")
    residual = abs(first.x1 - x0)
    if residual > config.RESIDUAL_TOL:
        logger.warning(f"cycle at x0={x0} has return residual {residual:.3g}")

    loop = integrate((x0, e2[1]), params, first.period, samples=config.LOOP_SAMPLES)
    turns = winding_number(loop.x, loop.y, e2)
    if abs(turns) != 1:
        logger.warning(f"cycle at x0={x0} winds {turns} times around E2")
    return LimitCycle(
        x0=x0,
        period=first.period,
        stability=stability,
        slope=slope,
        residual=residual,
        direction_found=found,
        side_displacements=sides,
        loop_x=loop.x,
        loop_y=loop.y,
    )


def find_limit_cycles(
    params: DimensionlessParams,
    x_max: Optional[float] = None,
    resolution: Optional[int] = None,
    x_min: Optional[float] = None,
    directions: Sequence[Direction] = (Direction.FORWARD, Direction.BACKWARD),
) -> list[LimitCycle]:
    """
    Cycles crossing the section between x_min (default x2 + offset) and x_max
    (default the trapping-region edge), from sign changes of the displacement
    in each time direction.  Sorted from the innermost out.
    """
    config = get_integrator_config()
    e2_eq = upper_equilibrium(params)
    if e2_eq is None:
        logger.info("No upper equilibrium; no cycles to find")
        return []
    e2 = (e2_eq.x, e2_eq.y)
    resolution = config.SCAN_POINTS if resolution is None else resolution
    x_min = e2[0] * (1.0 + config.SECTION_OFFSET_REL) if x_min is None else x_min
    x_max = (1.0 / params.c - e2[1]) if x_max is None else x_max
    grid = np.linspace(x_min, x_max, resolution)

    roots: list[tuple[float, Direction]] = []
    for direction in directions:
        values = parallel_map(lambda x: displacement(float(x), params, direction, e2), grid)
        table = dict(zip(grid.tolist(), values))
        for lo, hi in sign_change_brackets(lambda x: table[x], grid.tolist()):
            try:
                x0 = bisect_root(
                    lambda x: poincare_return(x, params, direction, e2).x1 - x, lo, hi, 1e-12
                )
            except (BifurcatoError, ValueError) as e:
                logger.warning(f"bracket ({lo}, {hi}) lost during bisection: {e}")
                continue
            roots.append((x0, direction))
        logger.info(f"{direction.value} scan: {len(roots)} cycle candidates so far")

    merged: list[tuple[float, Direction]] = []
    for x0, direction in sorted(roots):
        if merged and abs(x0 - merged[-1][0]) < config.MERGE_TOL:
            continue
        merged.append((x0, direction))

    spacing = float(grid[1] - grid[0]) if resolution > 1 else abs(x_max - x_min)
    positions = [x0 for x0, _ in merged]
    cycles = []
    for index, (x0, direction) in enumerate(merged):
        gaps = [abs(x0 - other) for other in positions[max(index - 1, 0):index + 2] if other != x0]
        side_step = min([spacing] + [0.5 * gap for gap in gaps])
        try:
            cycles.append(_build_cycle(x0, params, e2, direction, side_step))
        except BifurcatoError as e:
            logger.warning(f"cycle candidate at x0={x0} dropped: {e}")
    _check_alternation(cycles)
    return cycles


def _check_alternation(cycles: Sequence[LimitCycle]) -> None:
    hyperbolic = [c for c in cycles if c.stability is not CycleStability.SEMI_STABLE]
    for inner, outer in zip(hyperbolic, hyperbolic[1:]):
        if inner.stability is outer.stability:
            logger.warning(
                f"adjacent cycles at {inner.x0:.6g} and {outer.x0:.6g} are both {inner.stability.value}"
            )


def phase_portrait(
    params: DimensionlessParams,
    starts: Sequence[Sequence[float]],
    t_end: float,
    samples: int = 2000,
    direction: Direction = Direction.FORWARD,
) -> PhasePortrait:
    starts = [(float(s[0]), float(s[1])) for s in starts]
    trajectories = parallel_map(
        lambda s: integrate(s, params, t_end, samples=samples, direction=direction), starts
    )
    return PhasePortrait(starts=starts, trajectories=trajectories)


# ============================================================================
# Disease-free attraction
# ============================================================================

def trapping_region_starts(
    params: DimensionlessParams, count: int, rng: np.random.Generator
) -> list[tuple[float, float]]:
    """Uniform starts in the open triangle x, y > 0, x + y < 1/c."""
    side = 1.0 / params.c
    starts = []
    for u, v in rng.uniform(0.0, 1.0, size=(count, 2)):
        if u + v >= 1.0:
            u, v = 1.0 - u, 1.0 - v
        starts.append((float(u * side), float(v * side)))
    return starts


def origin_attraction(
    params: DimensionlessParams,
    starts: Sequence[Sequence[float]],
    t_end: float = 1e4,
    tol: float = 1e-6,
) -> OriginAttraction:
    """Integrate every start to ``t_end`` and compare its distance to (0, 0) with ``tol``."""
    if positive_equilibria(params):
        logger.warning("positive equilibria exist; the origin need not attract every start")
    starts = [(float(s[0]), float(s[1])) for s in starts]
    ends = parallel_map(lambda s: integrate(s, params, t_end), starts)
    norms = [math.hypot(t.x[-1], t.y[-1]) for t in ends]
    result = OriginAttraction(
        t_end=t_end, tol=tol, starts=starts, final_norms=norms,
        converged=all(norm < tol for norm in norms),
    )
    if not result.converged:
        logger.warning(f"{sum(n >= tol for n in norms)} of {len(norms)} starts stay away from the origin")
    return result
