"""
End-to-end reproduction of the published parameter sets.

Each case runs a fixed sequence of node functions over a ReproState.  A node
adds its section to ``state.results``; a node that fails records the error
and the pipeline carries on with the next one.
"""

import logging
import time
from datetime import datetime, timezone
from typing import Any, Callable, Optional
from uuid import uuid4

from pydantic import BaseModel, Field

from core.config import get_tolerances
from core.exceptions import EquilibriumLost
from models.dynamics import CycleStability, Direction
from models.geometry import CurveLabel
from models.params import DimensionlessParams
from models.run import ReproCase, ReproState, RunStatus
from services import (
    bifurcation_geometry,
    critical_loci,
    dynamics,
    focus_quantities,
    local_analysis,
    unfolding,
)
from services.equilibria import discriminant, reduce
from utils.numerics import make_rng

logger = logging.getLogger(__name__)

Node = Callable[[ReproState], ReproState]


class CaseDefinition(BaseModel):
    """Published parameters of one case and the options its nodes read."""

    params: DimensionlessParams
    nodes: list[str]
    codim_parameters: list[str] = Field(default_factory=list)
    focal_indices: list[int] = Field(default_factory=list)
    cycle_window: Optional[tuple[float, float]] = None
    unfolding_parameters: list[str] = Field(default_factory=list)
    cycle_amplitudes: list[float] = Field(default_factory=list)
    nested_window: Optional[tuple[float, float]] = None
    nested_resolution: int = 16
    portrait_starts: list[tuple[float, float]] = Field(default_factory=list)
    portrait_t_end: float = 300.0
    marked_eps1: Optional[float] = None
    marked_eps2: list[float] = Field(default_factory=list)
    attraction_starts: int = 0
    attraction_seed: int = 0
    normal_form_samples: list[tuple[float, float, float]] = Field(default_factory=list)


CASES: dict[ReproCase, CaseDefinition] = {
    ReproCase.GLOBAL: CaseDefinition(
        params=DimensionlessParams(a=-1.5, b=1.0, c=0.3, m=1.4, n=0.6),
        nodes=["equilibria", "origin_attraction"],
        attraction_starts=20,
    ),
    ReproCase.FIG5A: CaseDefinition(
        params=DimensionlessParams(a=-1.5, b=1.0, c=0.3, m=0.5, n=0.42696),
        nodes=["equilibria", "critical"],
    ),
    ReproCase.FIG5B: CaseDefinition(
        params=DimensionlessParams(a=-1.5, b=1.0, c=0.650837, m=0.5, n=1.85),
        nodes=["equilibria", "critical"],
    ),
    ReproCase.FIG7A: CaseDefinition(
        params=DimensionlessParams(a=-1.5, b=1.8045924, c=0.330275, m=0.05, n=0.172824),
        nodes=["equilibria", "critical", "normal_form"],
    ),
    ReproCase.FIG7B: CaseDefinition(
        params=DimensionlessParams(a=-1.8, b=1.0, c=0.330275, m=0.06438, n=0.172824),
        nodes=["equilibria", "bt3", "normal_form", "bt3_transversality"],
    ),
    ReproCase.FIG8: CaseDefinition(
        params=DimensionlessParams(a=-0.3, b=0.5, c=0.1253449, m=0.4, n=0.3173105),
        nodes=["equilibria", "critical", "normal_form", "bt2_unfolding", "bt2_marks"],
        marked_eps1=-0.0303449,
        marked_eps2=[-0.0830482, -0.08601394, -0.0876136, -0.0884821, -0.08852161],
    ),
    ReproCase.EX51: CaseDefinition(
        params=DimensionlessParams(a=-0.35, b=1.0, c=0.0988432, m=0.0292698, n=0.05),
        nodes=["equilibria", "hopf", "focus", "codim", "cycles", "nested_cycles", "portrait"],
        codim_parameters=["a", "n"],
        focal_indices=[1, 3],
        cycle_window=(0.402, 0.6),
        unfolding_parameters=["a", "n"],
        cycle_amplitudes=[0.02, 0.05],
        nested_window=(0.405, 0.48),
        nested_resolution=16,
        portrait_starts=[(0.415, 8.1), (0.45, 8.1), (0.476, 8.1)],
    ),
    ReproCase.EX52: CaseDefinition(
        params=DimensionlessParams(a=2.5, b=0.02, c=0.0300281, m=0.0391069, n=0.0387063),
        nodes=["equilibria", "hopf", "focus", "codim", "cycles", "nested_cycles", "portrait"],
        codim_parameters=["a", "c", "n"],
        focal_indices=[1, 3, 5],
        cycle_window=(1.09, 3.2),
        # (a, c, n) is nearly singular for steering; (a, m, n) is not
        unfolding_parameters=["a", "m", "n"],
        cycle_amplitudes=[0.1, 0.2, 0.3],
        nested_window=(1.1, 1.5),
        nested_resolution=9,
        portrait_starts=[(1.2, 28.0), (2.1, 32.0), (2.37, 32.15), (1.8, 30.0), (3.15, 32.15)],
        portrait_t_end=600.0,
    ),
    ReproCase.HOPF_REGIONS: CaseDefinition(
        params=DimensionlessParams(a=2.5, b=0.02, c=0.0300281, m=0.0391069, n=0.0387063),
        nodes=["focus", "normal_form_regions"],
        # no cycles; one stable; unstable then stable; three; a semistable cycle on BS
        normal_form_samples=[
            (-0.1, -1.0, -1.0),
            (0.01, -1.0, 0.0),
            (-0.01, 1.0, 0.0),
            (3.6e-5, -0.0049, 0.14),
            (-0.01875, 0.0875, 0.2),
        ],
    ),
}


def _case(state: ReproState) -> CaseDefinition:
    return CASES[state.case]


# ============================================================================
# Nodes
# ============================================================================

def equilibria_node(state: ReproState) -> ReproState:
    """Equilibria at six-digit precision, with their linear types."""
    band = get_tolerances().SIX_DIGIT_ZERO_REL
    rc = reduce(state.params)
    classified = local_analysis.classify_all(state.params, zero_tol=band)
    state.results["equilibria"] = {
        "discriminant": discriminant(state.params),
        "discriminant_scaled": discriminant(state.params) / rc.scale,
        "points": [row.model_dump(mode="json") for row in classified],
    }
    return state


def critical_node(state: ReproState) -> ReproState:
    """Codimension-2 point (x*, n*, c*) for the case's (a, b, m)."""
    p = state.params
    point = critical_loci.critical_point(p.a, p.b, p.m)
    state.results["critical"] = {
        "point": point.model_dump(mode="json"),
        "residuals": critical_loci.critical_residuals(
            p.replace(c=point.c_star, n=point.n_star), point.x_star
        ),
        "published_offset": {"c": p.c - point.c_star, "n": p.n - point.n_star},
    }
    return state


def bt3_node(state: ReproState) -> ReproState:
    p = state.params
    point = critical_loci.bt3_critical(p.a, p.m)
    state.results["bt3"] = {
        "point": point.model_dump(mode="json"),
        "published_offset": {
            "b": p.b - point.b_star, "c": p.c - point.c_star, "n": p.n - point.n_star
        },
    }
    return state


def normal_form_node(state: ReproState) -> ReproState:
    """xi, zeta, eta at x*; at the codimension-3 case the exact critical triple is used."""
    p = state.params
    if state.case is ReproCase.FIG7B:
        exact = critical_loci.bt3_params(p.a, p.m)
        x = critical_loci.x_star(p.a, p.m)
        coeffs = critical_loci.normal_form(exact, x, higher=True)
        extra = {"chi_rational": critical_loci.chi_rational(p.a, x)}
    else:
        point = critical_loci.critical_point(p.a, p.b, p.m)
        base = p.replace(c=point.c_star, n=point.n_star)
        coeffs = critical_loci.normal_form(base, point.x_star)
        extra = {
            "zeta_rational": critical_loci.zeta_rational(base, point.x_star),
            "eta_rational": critical_loci.eta_rational(base, point.x_star),
        }
    state.results["normal_form"] = {**coeffs.model_dump(mode="json"), **extra}
    return state


def bt3_transversality_node(state: ReproState) -> ReproState:
    p = state.params
    exact = critical_loci.bt3_params(p.a, p.m)
    report = unfolding.bt3_transversality(exact, critical_loci.x_star(p.a, p.m))
    state.results["bt3_transversality"] = report.model_dump(mode="json")
    return state


def bt2_unfolding_node(state: ReproState) -> ReproState:
    """2-jets by exact reduction, cross-checked against the closed forms, and the curves."""
    p = state.params
    point = critical_loci.critical_point(p.a, p.b, p.m)
    base = unfolding.bt2_base_params(p, point)
    jet = unfolding.bt2_jets(base, point)
    closed = unfolding.bt2_closed_form(base, point, jet.zeta, jet.eta)
    curves = unfolding.bt2_curves(jet)
    state.results["bt2_unfolding"] = {
        "jet": jet.model_dump(mode="json"),
        "closed_form": closed.model_dump(mode="json"),
        "linear_determinant": jet.linear_determinant,
        "linear_determinant_closed_form": unfolding.bt2_linear_determinant(point, jet.zeta, jet.eta),
        "curves": {c.label.value: len(c.points) for c in curves},
    }
    state.execution_metrics["bt2_jet"] = jet
    return state


def _region(e2: float, hopf: float, homoclinic: float) -> str:
    if e2 > homoclinic:
        return "I"
    if e2 > hopf:
        return "II"
    return "III"


def bt2_marks_node(state: ReproState) -> ReproState:
    """
    Curve crossings of the 2-jet at the marked eps1, the exact Hopf crossing
    of the full system on the same line, and at each published eps2 the
    region it falls in together with the trace and linear type of E2.
    """
    case = _case(state)
    jet = state.execution_metrics.get("bt2_jet")
    p = state.params
    point = critical_loci.critical_point(p.a, p.b, p.m)
    base = unfolding.bt2_base_params(p, point)
    if jet is None:
        jet = unfolding.bt2_jets(base, point)
    e1 = case.marked_eps1
    crossings = {
        label.value: unfolding.solve_curve_at(jet, label, e1)
        for label in (CurveLabel.SN_PLUS, CurveLabel.HOMOCLINIC, CurveLabel.HOPF)
    }
    hopf = crossings[CurveLabel.HOPF.value]
    homoclinic = crossings[CurveLabel.HOMOCLINIC.value]
    hopf_exact = unfolding.hopf_crossing(base, point, e1, near=hopf)
    marks = []
    for e2 in case.marked_eps2:
        marked = base.replace(c=point.c_star + e1, n=point.n_star + e2)
        e2_eq = local_analysis.upper_equilibrium(marked)
        classification = local_analysis.classify(e2_eq, marked) if e2_eq else None
        marks.append({
            "eps1": e1,
            "eps2": e2,
            "region": _region(e2, hopf, homoclinic),
            "region_exact_hopf": _region(e2, hopf_exact, homoclinic),
            "upper_equilibrium": classification.tag.value if classification else None,
            "upper_trace": classification.trace if classification else None,
        })
    state.results["bt2_marks"] = {
        "eps1": e1,
        "crossings": crossings,
        "hopf_exact": hopf_exact,
        "hopf_jet_error": hopf - hopf_exact,
        "marks": marks,
    }
    logger.info(
        f"[{state.case.value}] jet Hopf {hopf:.7g}, full-system Hopf {hopf_exact:.7g}, "
        f"regions {[m['region'] for m in marks]}"
    )
    return state


def hopf_node(state: ReproState) -> ReproState:
    p = state.params
    e2 = local_analysis.upper_equilibrium(p)
    if e2 is None:
        raise EquilibriumLost("no upper equilibrium")
    trace_residual, transversality = local_analysis.hopf_residuals(p, e2.x)
    state.results["hopf"] = {
        "x2": e2.x,
        "classification": local_analysis.classify(e2, p).model_dump(mode="json"),
        "trace_residual": trace_residual,
        "transversality": transversality,
        "dulac_no_cycles": local_analysis.dulac_no_cycles(p),
    }
    return state


def focus_node(state: ReproState) -> ReproState:
    """Published parameters carry six digits, so the wider vanishing band applies."""
    tol = get_tolerances().SIX_DIGIT_FOCUS_TOL
    state.results["focus"] = focus_quantities.focal_values(state.params, tol=tol).model_dump(mode="json")
    return state


def codim_node(state: ReproState) -> ReproState:
    case = _case(state)
    report = focus_quantities.codim_jacobian(
        state.params, case.codim_parameters, case.focal_indices
    )
    state.results["codim_jacobian"] = report.model_dump(mode="json")
    return state


def _cycle_rows(cycles) -> list[dict[str, Any]]:
    return [c.model_dump(mode="json", exclude={"loop_x", "loop_y"}) for c in cycles]


def cycles_node(state: ReproState) -> ReproState:
    lo, hi = _case(state).cycle_window
    cycles = dynamics.find_limit_cycles(state.params, x_min=lo, x_max=hi)
    state.results["cycles"] = _cycle_rows(cycles)
    state.results["cycle_count"] = len(cycles)
    stable = sum(c.stability is CycleStability.STABLE for c in cycles)
    logger.info(f"[{state.case.value}] {len(cycles)} cycles ({stable} stable)")
    return state


def nested_cycles_node(state: ReproState) -> ReproState:
    """
    Steer the lower focal values so the displacement near E2 has a root at
    each amplitude, keeping the leading value, then scan the section for the
    small cycles.
    """
    case = _case(state)
    count = len(case.cycle_amplitudes)
    indices = [2 * k + 1 for k in range(count)]
    leading = getattr(focus_quantities.focal_values(state.params), f"B{2 * count + 1}")
    targets = focus_quantities.nested_cycle_targets(leading, case.cycle_amplitudes)
    steered = focus_quantities.unfold_focal_values(
        state.params, case.unfolding_parameters, indices, targets
    )
    lo, hi = case.nested_window
    cycles = dynamics.find_limit_cycles(
        steered.params, x_min=lo, x_max=hi, resolution=case.nested_resolution,
        directions=(Direction.FORWARD,),
    )
    state.results["nested_cycles"] = {
        "unfolding": steered.model_dump(mode="json"),
        "leading_focal_value": leading,
        "cycles": _cycle_rows(cycles),
        "cycle_count": len(cycles),
        "stability": [c.stability.value for c in cycles],
    }
    logger.info(
        f"[{state.case.value}] {len(cycles)} nested cycles: {[c.stability.value for c in cycles]}"
    )
    return state


def origin_attraction_node(state: ReproState) -> ReproState:
    """Seeded starts in the trapping region, each run until it settles on (0, 0)."""
    case = _case(state)
    starts = dynamics.trapping_region_starts(
        state.params, case.attraction_starts, make_rng(case.attraction_seed)
    )
    result = dynamics.origin_attraction(state.params, starts)
    state.results["origin_attraction"] = result.model_dump(mode="json")
    logger.info(
        f"[{state.case.value}] {len(starts)} starts, largest final norm {max(result.final_norms):.3g}"
    )
    return state


def normal_form_regions_node(state: ReproState) -> ReproState:
    rows = []
    for mu in _case(state).normal_form_samples:
        portrait = bifurcation_geometry.normal_form_portrait(mu)
        rows.append({
            "mu": list(portrait.mu),
            "origin_stable": portrait.origin_stable,
            "radii": [c.radius for c in portrait.cycles],
            "stability": [s.value for s in portrait.stability],
            "hopf": portrait.hopf.value if portrait.hopf else None,
        })
    state.results["normal_form_regions"] = rows
    return state


def portrait_node(state: ReproState) -> ReproState:
    case = _case(state)
    portrait = dynamics.phase_portrait(state.params, case.portrait_starts, case.portrait_t_end)
    state.results["portrait"] = [
        {"start": list(start), "end": [trajectory.x[-1], trajectory.y[-1]]}
        for start, trajectory in zip(portrait.starts, portrait.trajectories)
    ]
    return state


NODES: dict[str, Node] = {
    "equilibria": equilibria_node,
    "critical": critical_node,
    "bt3": bt3_node,
    "normal_form": normal_form_node,
    "bt3_transversality": bt3_transversality_node,
    "bt2_unfolding": bt2_unfolding_node,
    "bt2_marks": bt2_marks_node,
    "hopf": hopf_node,
    "focus": focus_node,
    "codim": codim_node,
    "cycles": cycles_node,
    "nested_cycles": nested_cycles_node,
    "portrait": portrait_node,
    "origin_attraction": origin_attraction_node,
    "normal_form_regions": normal_form_regions_node,
}


# ============================================================================
# Runner
# ============================================================================

def _run_node(name: str, state: ReproState) -> ReproState:
    start = time.perf_counter()
    logger.info(f"[{name}] Starting for case {state.case.value}")
    try:
        state = NODES[name](state)
    except Exception as e:
        logger.error(f"[{name}] failed: {e}", exc_info=True)
        state.errors.append(f"{name}: {e}")
    state.execution_metrics.setdefault("node_seconds", {})[name] = time.perf_counter() - start
    return state


def run_repro(
    case: ReproCase | str,
    params: Optional[DimensionlessParams] = None,
    skip: Optional[list[str]] = None,
) -> ReproState:
    """Run every node of ``case`` in order; ``skip`` drops named nodes (e.g. "cycles")."""
    case = ReproCase(case)
    definition = CASES[case]
    state = ReproState(case=case, params=params or definition.params, run_id=str(uuid4()))
    state.stamp_start()
    for name in definition.nodes:
        if skip and name in skip:
            continue
        state = _run_node(name, state)

    # Internal objects are not part of the report
    state.execution_metrics.pop("bt2_jet", None)
    state.end_time = datetime.now(timezone.utc)
    state.execution_metrics["total_duration_seconds"] = (
        state.end_time - state.start_time
    ).total_seconds()
    state.status = RunStatus.FAILED if state.errors else RunStatus.COMPLETED
    logger.info(f"Repro {case.value} finished with {len(state.errors)} errors")
    return state


def report(state: ReproState) -> dict[str, Any]:
    """JSON-ready report of a finished run."""
    return state.model_dump(mode="json")
