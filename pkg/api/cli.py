"""
Command-line interface.

Results go to stdout (or --output) as JSON or CSV; progress and errors go to
stderr through rich.  Exit codes: 0 success, 1 domain error, 2 usage error.

Parameters come from flags, from a JSON RunConfig given with --config, or
both; flags override file values.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Optional

import click
import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from api.serializers import OutputFormat, serialize
from config.logging import configure_logging
from core.config import get_settings, get_unfolding_config
from core.exceptions import BifurcatoError
from models.dynamics import Direction
from models.params import DimensionalParams, DimensionlessParams
from models.run import ReproCase, RunConfig
from orchestrator.repro import report, run_repro
from services import (
    bifurcation_geometry,
    critical_loci,
    dynamics,
    equilibria,
    focus_quantities,
    local_analysis,
    model_core,
    unfolding,
)
from utils.numerics import make_rng

logger = logging.getLogger(__name__)

err_console = Console(stderr=True)

DIMENSIONLESS = ("a", "b", "c", "m", "n")
DIMENSIONAL = ("Lambda", "d", "mu", "delta", "kappa", "beta", "gamma")


# ============================================================================
# Shared options
# ============================================================================

def parameter_options(fn: Callable) -> Callable:
    """--a .. --n and the dimensional rates, plus --config."""
    for name in reversed(DIMENSIONAL):
        fn = click.option(f"--{name}", f"dim_{name}", type=float, default=None,
                          help=f"Dimensional rate {name}")(fn)
    for name in reversed(DIMENSIONLESS):
        fn = click.option(f"--{name}", name, type=float, default=None)(fn)
    return click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
                        default=None, help="JSON RunConfig; flags override it")(fn)


def output_options(fn: Callable) -> Callable:
    fn = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None,
                      help="Write to this file instead of stdout")(fn)
    return click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                        default=OutputFormat.JSON.value, show_default=True)(fn)


def _load_config_file(path: Optional[str]) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise click.BadParameter(f"not valid JSON: {e}", param_hint="--config")


def build_run_config(kwargs: dict[str, Any], options: Optional[dict[str, Any]] = None) -> RunConfig:
    """Merge the config file with the flags; UsageError unless one complete parameter set remains."""
    document = _load_config_file(kwargs.pop("config_file", None))
    dimensionless = dict(document.get("dimensionless") or {})
    dimensional = dict(document.get("dimensional") or {})
    for name in DIMENSIONLESS:
        if kwargs.get(name) is not None:
            dimensionless[name] = kwargs[name]
    for name in DIMENSIONAL:
        if kwargs.get(f"dim_{name}") is not None:
            dimensional[name] = kwargs[f"dim_{name}"]

    if dimensionless and dimensional:
        raise click.UsageError("give either --a..--n or the dimensional rates, not both")
    required = DIMENSIONLESS if dimensionless or not dimensional else DIMENSIONAL
    given = dimensionless if required is DIMENSIONLESS else dimensional
    missing = [name for name in required if name not in given]
    if missing:
        raise click.UsageError(f"missing parameter --{missing[0]}")

    merged_options = {**document.get("options", {}), **(options or {})}
    try:
        return RunConfig(
            dimensionless=DimensionlessParams(**dimensionless) if dimensionless else None,
            dimensional=DimensionalParams(**dimensional) if dimensional else None,
            options={k: v for k, v in merged_options.items() if v is not None},
            seed=document.get("seed", 0),
        )
    except ValidationError as e:
        raise click.UsageError(str(e))


def resolve_params(run_config: RunConfig) -> DimensionlessParams:
    if run_config.dimensionless is not None:
        return model_core.validate(run_config.dimensionless)
    return model_core.nondimensionalize(run_config.dimensional)


def _option(run_config: RunConfig, name: str, default: Any = None) -> Any:
    return run_config.options.get(name, default)


def _emit(ctx: click.Context, command: str, config: Any, compute: Callable[[], Any],
          fmt: str, output: Optional[str]) -> None:
    """Run ``compute`` and write its result; domain errors exit with code 1."""
    try:
        result = compute()
        text = serialize(result, fmt, output, command=command, config=config)
    except BifurcatoError as e:
        err_console.print(f"[red]{e.code}[/red]: {e.message}")
        logger.debug(f"{command} failed", exc_info=True)
        ctx.exit(1)
    except TypeError as e:
        if "tabular" not in str(e):
            raise
        raise click.UsageError(f"{fmt} output is not available for {command}")
    if output is None:
        click.echo(text, nl=False)
    else:
        err_console.print(f"[green]{command}[/green] -> {output}")


def _csv_list(value: Optional[str], cast: Callable = str) -> Optional[list]:
    if value is None:
        return None
    return [cast(item.strip()) for item in value.split(",") if item.strip()]


# ============================================================================
# Group
# ============================================================================

@click.group(invoke_without_command=True)
@click.option("--log-level", default=None, help="Overrides BIFURCATO_LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Bifurcation workbench for the SIRS model with cubic saturated incidence."""
    settings = get_settings()
    configure_logging(log_level or ("DEBUG" if settings.DEBUG else settings.LOG_LEVEL))
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help(), err=True)
        ctx.exit(2)


@cli.command("equilibria")
@parameter_options
@click.option("--zero-tol", type=float, default=None, help="Relative band for a zero discriminant")
@output_options
@click.pass_context
def equilibria_cmd(ctx, fmt, output, zero_tol, **kwargs):
    """Solve and classify the equilibria."""
    run_config = build_run_config(kwargs, {"zero_tol": zero_tol})

    def compute():
        params = resolve_params(run_config)
        classified = local_analysis.classify_all(params, zero_tol=_option(run_config, "zero_tol"))
        rc = equilibria.reduce(params)
        rows = []
        for item in classified:
            row = item.model_dump(mode="json")
            if run_config.dimensional is not None:
                state = (item.equilibrium.x, item.equilibrium.y)
                row["dimensional"] = model_core.to_dimensional_state(state, run_config.dimensional).model_dump()
            rows.append(row)
        _equilibria_table(classified)
        return {
            "params": params,
            "reduced_cubic": rc,
            "discriminant": equilibria.discriminant(params),
            "equilibria": rows,
        }

    _emit(ctx, "equilibria", run_config, compute, fmt, output)


def _equilibria_table(classified) -> None:
    table = Table(title="Equilibria")
    for column in ("x", "y", "multiplicity", "type"):
        table.add_column(column)
    for item in classified:
        eq = item.equilibrium
        table.add_row(f"{eq.x:.8g}", f"{eq.y:.8g}", str(eq.multiplicity), item.classification.tag.value)
    err_console.print(table)


@cli.command("critical")
@click.option("--a", type=float, required=True)
@click.option("--m", type=float, required=True)
@click.option("--b", type=float, default=None, help="With b: the codimension-2 point (n*, c*)")
@click.option("--bt3", is_flag=True, help="Codimension-3 triple (b*, c*, n*)")
@click.option("--thresholds", "threshold_rates", default=None,
              help="Lambda,d,mu,delta,kappa,beta,gamma for the gamma thresholds")
@output_options
@click.pass_context
def critical_cmd(ctx, a, m, b, bt3, threshold_rates, fmt, output):
    """x*, the saddle-node/BT loci and the gamma thresholds."""
    rates = _csv_list(threshold_rates, float)
    if rates is not None and len(rates) != len(DIMENSIONAL):
        raise click.BadParameter(f"expected {len(DIMENSIONAL)} values", param_hint="--thresholds")
    config = {"a": a, "m": m, "b": b, "bt3": bt3, "thresholds": rates}

    def compute():
        result: dict[str, Any] = {"x_star": critical_loci.x_star(a, m)}
        if b is not None:
            result["codim2"] = critical_loci.critical_point(a, b, m)
        if bt3:
            result["codim3"] = critical_loci.bt3_critical(a, m)
        if rates is not None:
            result["gamma_thresholds"] = critical_loci.gamma_thresholds(
                DimensionalParams(**dict(zip(DIMENSIONAL, rates)))
            )
        return result

    _emit(ctx, "critical", config, compute, fmt, output)


@cli.command("normal-form")
@parameter_options
@click.option("--x", "x_eval", type=float, default=None, help="Evaluation point (default x*)")
@click.option("--higher", is_flag=True, help="Also xi5..xi8 and chi when eta vanishes")
@output_options
@click.pass_context
def normal_form_cmd(ctx, x_eval, higher, fmt, output, **kwargs):
    """xi1..xi8, zeta, eta and chi at the double equilibrium."""
    run_config = build_run_config(kwargs, {"x": x_eval, "higher": higher})

    def compute():
        params = resolve_params(run_config)
        x = x_eval if x_eval is not None else critical_loci.x_star(params.a, params.m)
        coeffs = critical_loci.normal_form(params, x, higher=higher)
        return {
            "x": x,
            "coefficients": coeffs,
            "zeta_rational": critical_loci.zeta_rational(params, x),
            "eta_rational": critical_loci.eta_rational(params, x),
            "residuals": critical_loci.critical_residuals(params, x),
        }

    _emit(ctx, "normal-form", run_config, compute, fmt, output)


@cli.command("unfold-bt2")
@click.option("--a", type=float, required=True)
@click.option("--b", type=float, required=True)
@click.option("--m", type=float, required=True)
@click.option("--eps1-range", type=float, default=None)
@click.option("--mesh", type=int, default=None)
@output_options
@click.pass_context
def unfold_bt2_cmd(ctx, a, b, m, eps1_range, mesh, fmt, output):
    """2-jets of (mu1, mu2) and the SN, Hopf and homoclinic curves."""
    config = get_unfolding_config()
    eps1_range = config.EPS1_RANGE if eps1_range is None else eps1_range
    mesh = config.MESH if mesh is None else mesh

    def compute():
        point = critical_loci.critical_point(a, b, m)
        params = DimensionlessParams(a=a, b=b, c=point.c_star, m=m, n=point.n_star)
        jet = unfolding.bt2_jets(params, point)
        curves = unfolding.bt2_curves(jet, np.linspace(-eps1_range, eps1_range, mesh + 1))
        if fmt == OutputFormat.CSV.value:
            return curves
        return {
            "point": point,
            "jet": jet,
            "closed_form": unfolding.bt2_closed_form(params, point, jet.zeta, jet.eta),
            "curves": curves,
        }

    _emit(ctx, "unfold-bt2", {"a": a, "b": b, "m": m, "eps1_range": eps1_range, "mesh": mesh},
          compute, fmt, output)


@cli.command("unfold-bt3")
@click.option("--a", type=float, required=True)
@click.option("--m", type=float, required=True)
@click.option("--mesh", type=int, default=None)
@output_options
@click.pass_context
def unfold_bt3_cmd(ctx, a, m, mesh, fmt, output):
    """Transversality at the codimension-3 point and the truncated surfaces."""
    mesh = get_unfolding_config().MESH if mesh is None else mesh

    def compute():
        params = critical_loci.bt3_params(a, m)
        x = critical_loci.x_star(a, m)
        grid = np.linspace(-1.0, 1.0, mesh)
        surfaces = unfolding.bt3_surfaces(
            u_grid=grid, v_grid=np.linspace(0.0, 1.0, mesh),
            mu1_grid=np.linspace(-1.0, 0.0, mesh), mu3_grid=grid,
        )
        if fmt == OutputFormat.CSV.value:
            return surfaces
        return {
            "params": params,
            "normal_form": critical_loci.normal_form(params, x, higher=True),
            "transversality": unfolding.bt3_transversality(params, x),
            "surfaces": surfaces,
        }

    _emit(ctx, "unfold-bt3", {"a": a, "m": m, "mesh": mesh}, compute, fmt, output)


@cli.command("focus")
@parameter_options
@click.option("--x2", type=float, default=None, help="Upper equilibrium (solved when omitted)")
@click.option("--codim", "codim_params", default=None, help="Comma-separated parameters, e.g. a,n")
@click.option("--indices", default=None, help="Comma-separated focal indices, e.g. 1,3")
@click.option("--tol", type=float, default=None, help="Vanishing tolerance for the weak-focus order")
@output_options
@click.pass_context
def focus_cmd(ctx, x2, codim_params, indices, tol, fmt, output, **kwargs):
    """Focal values at E2 and, optionally, the codimension Jacobian."""
    which = _csv_list(codim_params)
    B_list = _csv_list(indices, int)
    if (which is None) != (B_list is None):
        raise click.UsageError("--codim and --indices go together")
    if tol is not None and tol <= 0:
        raise click.BadParameter("must be > 0", param_hint="--tol")
    run_config = build_run_config(
        kwargs, {"x2": x2, "codim": which, "indices": B_list, "focus_tol": tol}
    )

    def compute():
        params = resolve_params(run_config)
        result: dict[str, Any] = {"focus": focus_quantities.focal_values(params, x2, tol)}
        if which is not None:
            result["codim_jacobian"] = focus_quantities.codim_jacobian(params, which, B_list)
        return result

    _emit(ctx, "focus", run_config, compute, fmt, output)


@cli.command("simulate")
@parameter_options
@click.option("--start", "starts", multiple=True, help="x,y start point (repeatable)")
@click.option("--random-starts", type=int, default=0, help="Extra seeded starts in the trapping region")
@click.option("--seed", type=int, default=None)
@click.option("--t-end", type=float, default=200.0, show_default=True)
@click.option("--samples", type=int, default=2000, show_default=True)
@click.option("--backward", is_flag=True)
@output_options
@click.pass_context
def simulate_cmd(ctx, starts, random_starts, seed, t_end, samples, backward, fmt, output, **kwargs):
    """Integrate trajectories from the given starts."""
    points = []
    for item in starts:
        values = _csv_list(item, float)
        if len(values) != 2:
            raise click.BadParameter(f"expected x,y but got {item!r}", param_hint="--start")
        points.append(tuple(values))
    run_config = build_run_config(
        kwargs, {"starts": points, "random_starts": random_starts, "t_end": t_end, "samples": samples}
    )
    if seed is not None:
        run_config = run_config.model_copy(update={"seed": seed})
    if not points and not random_starts:
        raise click.UsageError("give at least one --start or --random-starts")

    def compute():
        params = resolve_params(run_config)
        rng = make_rng(run_config.seed)
        extra = []
        for _ in range(random_starts):
            x, y = rng.uniform(0.0, 1.0 / params.c, size=2)
            while x + y > 1.0 / params.c:
                x, y = rng.uniform(0.0, 1.0 / params.c, size=2)
            extra.append((float(x), float(y)))
        direction = Direction.BACKWARD if backward else Direction.FORWARD
        return dynamics.phase_portrait(params, points + extra, t_end, samples, direction)

    _emit(ctx, "simulate", run_config, compute, fmt, output)


@cli.command("cycles")
@parameter_options
@click.option("--x-min", type=float, default=None)
@click.option("--x-max", type=float, default=None)
@click.option("--resolution", type=int, default=None)
@output_options
@click.pass_context
def cycles_cmd(ctx, x_min, x_max, resolution, fmt, output, **kwargs):
    """Limit cycles around E2 from the section return map."""
    run_config = build_run_config(kwargs, {"x_min": x_min, "x_max": x_max, "resolution": resolution})

    def compute():
        params = resolve_params(run_config)
        cycles = dynamics.find_limit_cycles(
            params,
            x_max=_option(run_config, "x_max"),
            resolution=_option(run_config, "resolution"),
            x_min=_option(run_config, "x_min"),
        )
        _cycles_table(cycles)
        return cycles

    _emit(ctx, "cycles", run_config, compute, fmt, output)


def _cycles_table(cycles) -> None:
    table = Table(title=f"{len(cycles)} limit cycles")
    for column in ("x0", "period", "stability", "slope"):
        table.add_column(column)
    for c in cycles:
        table.add_row(f"{c.x0:.10g}", f"{c.period:.6g}", c.stability.value, f"{c.slope:.6g}")
    err_console.print(table)


@cli.command("geometry")
@click.option("--mesh", type=int, default=50, show_default=True)
@click.option("--z-range", type=float, default=1.0, show_default=True)
@output_options
@click.pass_context
def geometry_cmd(ctx, mesh, z_range, fmt, output):
    """Cusp curve, the bifurcation surface BS, its edge C and the swallowtail."""

    def compute():
        cusp = bifurcation_geometry.cusp_curve(np.linspace(-z_range, z_range, mesh))
        return [cusp, *bifurcation_geometry.hopf_unfolding_surfaces(mesh=mesh)]

    _emit(ctx, "geometry", {"mesh": mesh, "z_range": z_range}, compute, fmt, output)


@cli.command("repro")
@click.argument("case", type=click.Choice([c.value for c in ReproCase]))
@click.option("--skip", default=None, help="Comma-separated node names to skip, e.g. cycles,portrait")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def repro_cmd(ctx, case, skip, output):
    """Run a published example end to end."""
    skipped = _csv_list(skip) or []

    def compute():
        state = run_repro(case, skip=skipped)
        for error in state.errors:
            err_console.print(f"[yellow]node error[/yellow]: {error}")
        document = report(state)
        # Run ids and timings differ between runs
        for key in ("run_id", "start_time", "end_time", "execution_metrics"):
            document.pop(key, None)
        return document

    _emit(ctx, "repro", {"case": case, "skip": skipped}, compute, OutputFormat.JSON.value, output)


def main() -> None:
    cli(prog_name="bifurcato")


if __name__ == "__main__":
    main()
