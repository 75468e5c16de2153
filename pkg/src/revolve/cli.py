"""Command-line front end: ``revolve eval | intersect | analyze | reproduce``.

Exit codes: 0 success, 2 usage or parse error, 3 operator failure,
4 analysis failure.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import analysis
from .bodies import MeridianProfile
from .experiments import SCENARIOS, ExperimentConfig, run_scenario
from .io import BodySpecError, csv_text, parse_body, write_csv, write_json
from .quadrature import QuadratureConfig, QuadratureError
from .radon import (
    DEFAULT_CONFIG,
    DegenerateProfile,
    IntersectionProfile,
    iterate_intersection,
    theta_grid,
)

EXIT_USAGE = 2
EXIT_OPERATOR = 3
EXIT_ANALYSIS = 4


class _Failure(click.ClickException):
    def __init__(self, message, code):
        super().__init__(message)
        self.exit_code = code


class BodyType(click.ParamType):
    name = "body"

    def convert(self, value, param, ctx):
        if isinstance(value, MeridianProfile):
            return value
        try:
            return parse_body(value)
        except BodySpecError as exc:
            self.fail(str(exc), param, ctx)


BODY = BodyType()


def _config(tol, grid) -> QuadratureConfig:
    kw = {}
    if tol is not None:
        kw["abs_tol"] = tol
    if grid is not None:
        kw["grid_size"] = grid
    try:
        return QuadratureConfig(**{**DEFAULT_CONFIG.__dict__, **kw})
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _finite(obj):
    """JSON-safe copy: nan -> null, +-inf -> "inf" / "-inf"."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


body_option = click.option("--body", type=BODY, required=True,
                           help="ball | cone | cylinder | segment:a,b | pball:p | ktee:t | mod4 | capped:alpha | file:<csv>")
tol_option = click.option("--tol", type=click.FloatRange(min=0.0), default=None,
                          help="Absolute quadrature tolerance (default 1e-10).")
out_option = click.option("--out", type=click.Path(file_okay=False, path_type=Path), envvar="REVOLVE_OUT",
                          default=Path("results"), show_default=True,
                          help="Output directory; REVOLVE_OUT is used when the flag is absent.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Intersection bodies of bodies of revolution and their equatorial convexity."""


@main.command("eval")
@body_option
@click.option("--what", type=click.Choice(["rho", "psi"]), default="rho", show_default=True)
@click.option("--grid", type=click.IntRange(min=2), default=65, show_default=True, help="Number of rows.")
@click.option("--xmax", type=click.FloatRange(min=0.0, min_open=True), default=10.0, show_default=True,
              help="Upper end of the x range for --what psi.")
@click.option("--format", "fmt_", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
def cmd_eval(body, what, grid, xmax, fmt_):
    """Tabulate rho(theta) on [0, pi/2] or psi(x) on [0, xmax]."""
    if what == "rho":
        cols = ("theta", "rho")
        t = theta_grid(grid)
        v = np.asarray(body.radial(t), dtype=float)
    else:
        cols = ("x", "psi")
        t = np.linspace(0.0, xmax, grid)
        v = np.asarray(body.psi(t), dtype=float)
    if fmt_ == "csv":
        click.echo(csv_text(cols, zip(t, v)), nl=False)
    else:
        click.echo(json.dumps(_finite({cols[0]: t.tolist(), cols[1]: v.tolist()})))


@main.command("intersect")
@body_option
@click.option("--n", "n", type=click.IntRange(min=3), required=True, help="Dimension.")
@click.option("--iters", type=click.IntRange(min=1, max=16), default=1, show_default=True)
@click.option("--grid", type=click.IntRange(min=64), default=None, help="Theta samples per step (default 1024).")
@tol_option
@out_option
def cmd_intersect(body, n, iters, grid, tol, out):
    """Apply the intersection-body operator ITERS times.

    Writes step_<k>.json per step and intersect.csv (step,theta,rho).  Each
    step holds the raw operator output; the next step starts from it
    rescaled to rho(pi/2) = 1.
    """
    cfg = _config(tol, grid)
    try:
        results = iterate_intersection(body, n, iters, cfg)
    except (QuadratureError, DegenerateProfile, ValueError, FloatingPointError) as exc:
        raise _Failure(f"operator failed: {exc}", EXIT_OPERATOR) from exc
    rows = []
    for k, res in enumerate(results, start=1):
        write_json(out / f"step_{k}.json", res.to_json())
        rows.extend((k, t, r) for t, r in zip(res.profile.theta, res.profile.rho))
        click.echo(f"step {k}: rho(0)={res.profile.rho[0]:.12g} rho(pi/2)={res.profile.rho[-1]:.12g} "
                   f"err_est={res.max_quadrature_error_estimate:.3g}")
    path = write_csv(out / "intersect.csv", ("step", "theta", "rho"), rows)
    click.echo(f"wrote {path}")


@main.command("analyze")
@body_option
@click.option("--analysis", "which", type=click.Choice(["power-type", "equator", "bm-ball"]), required=True)
@click.option("--n", "n", type=click.IntRange(min=3), default=None, help="Dimension of the operator.")
@click.option("--raw", is_flag=True, help="Analyze the body itself instead of its intersection body.")
@tol_option
def cmd_analyze(body, which, n, raw, tol):
    """Print a JSON report for the body or its intersection body."""
    if not raw and n is None:
        raise click.UsageError("--n is required unless --raw is given")
    cfg = _config(tol, None)
    try:
        target = body if raw else IntersectionProfile(body, n, cfg)
    except (DegenerateProfile, ValueError) as exc:
        raise _Failure(f"operator failed: {exc}", EXIT_OPERATOR) from exc
    try:
        if which == "power-type":
            report = analysis.power_type_fit(target).to_json()
        elif which == "equator":
            report = analysis.equator_convexity(target, cfg).to_json()
        else:
            report = analysis.bm_ball(target).to_json()
    except QuadratureError as exc:
        raise _Failure(f"operator failed: {exc}", EXIT_OPERATOR) from exc
    except (analysis.AnalysisError, ValueError, ZeroDivisionError) as exc:
        raise _Failure(f"analysis failed: {exc}", EXIT_ANALYSIS) from exc
    payload = {"analysis": which, "n": None if raw else n, "raw": raw, **report}
    click.echo(json.dumps(_finite(payload), indent=2))


@main.command("reproduce")
@click.argument("scenario")
@click.option("--seed", type=int, default=ExperimentConfig.seed, show_default=True)
@tol_option
@out_option
@click.option("--svg/--no-svg", default=True, show_default=True)
def cmd_reproduce(scenario, seed, tol, out, svg):
    """Run a registered scenario (or "all") and print a pass/fail table."""
    if scenario != "all" and scenario not in SCENARIOS:
        raise click.BadParameter(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)} or all",
                                 param_hint="SCENARIO")
    ids = SCENARIOS if scenario == "all" else (scenario,)
    cfg = ExperimentConfig(seed=seed, quadrature=_config(tol, None), out=out, svg=svg)
    ok = True
    for sid in ids:
        sc = run_scenario(sid, cfg)
        ok &= sc.passed
        click.echo(f"{sid:<28} {'PASS' if sc.passed else 'FAIL'} {sc.seconds:8.2f}s")
        if sc.diagnostics:
            click.echo("    " + sc.diagnostics.splitlines()[0], err=True)
        for r in sc.failures[:5]:
            click.echo(f"    {r.body} n={r.n} {r.metric}: {r.value:.6g} {r.relation} {r.bound:.6g}", err=True)
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
