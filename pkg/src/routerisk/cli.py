"""Command-line interface: score, calibrate, simulate, sweep, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .calibration import (
    CHECK_TOLERANCES,
    REFERENCE_FITS,
    TableParseError,
    build_dataset,
    check_fit,
    fit_line,
    load_tables,
)
from .gridsim import (
    closed_form_path_probability,
    load_scene_fixture,
    simulate,
    straight_path,
)
from .presets import PresetBundle, PresetParseError, builtin_presets, load_presets
from .risk import ACTIVITY_LEVELS
from .routes import (
    RouteParseError,
    ScoringConfig,
    parse_routes_file,
    rank_routes,
    walking_sweep,
)

_DATA_DIR = Path(__file__).parent / "data"


def _load_bundle(presets_file: str | None) -> PresetBundle:
    try:
        return load_presets(presets_file) if presets_file else builtin_presets()
    except (OSError, PresetParseError) as exc:
        raise click.ClickException(str(exc)) from None


def _fmt(value: float) -> str:
    return f"{value:.6g}"


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Rank travel routes by airborne infection risk."""


@main.command()
@click.argument("route_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--presets", "presets_file", type=click.Path(exists=True, dir_okay=False),
              help="Alternate preset file (default: built-in).")
@click.option("--prevalence", type=float, default=None,
              help="Override the infectious population fraction.")
@click.option("--derived", is_flag=True,
              help="Recompute rates from k(E) lines instead of the canonical constants.")
@click.option("--best", is_flag=True, help="Print only the id of the safest route.")
def score(route_file: str, presets_file: str | None, prevalence: float | None,
          derived: bool, best: bool) -> None:
    """Score and rank the routes in ROUTE_FILE (safest first)."""
    presets = _load_bundle(presets_file)
    try:
        routes = parse_routes_file(route_file)
    except RouteParseError as exc:
        raise click.ClickException(str(exc)) from None
    if not routes:
        raise click.UsageError(f"no routes in {route_file}")
    if prevalence is not None and not 0.0 <= prevalence <= 1.0:
        raise click.UsageError(f"prevalence must be in [0, 1], got {prevalence}")

    config = ScoringConfig(derived=derived)
    try:
        reports = rank_routes(routes, presets, prevalence, config)
    except (ValueError, KeyError) as exc:
        raise click.ClickException(str(exc)) from None

    if best:
        click.echo(reports[0].route_id)
        return
    mode_note = "derived" if derived else "exact"
    click.echo(f"# {len(reports)} routes, {mode_note} rates, presets {presets.version}")
    for rank, report in enumerate(reports, start=1):
        click.echo(f"{rank}. {report.route_id}  total {_fmt(report.total)}  {report.label!r}")
        for seg in report.per_segment:
            click.echo(
                f"     [{seg.index}] {seg.mode.value:<8s} {_fmt(seg.hours)} h"
                f"  rate {_fmt(seg.rate_per_hour)}/h  p {_fmt(seg.probability)}"
            )


@main.command()
@click.argument("tables_dir", required=False,
                type=click.Path(exists=True, file_okay=False))
@click.option("--check", is_flag=True,
              help="Compare fits against the reference constants; nonzero exit on breach.")
def calibrate(tables_dir: str | None, check: bool) -> None:
    """Fit k(E) lines from calibration tables (default: shipped fixtures)."""
    directory = Path(tables_dir) if tables_dir else _DATA_DIR / "calibration"
    try:
        groups = load_tables(directory)
    except TableParseError as exc:
        raise click.ClickException(str(exc)) from None

    failures = []
    for env, env_groups in groups.items():
        points = build_dataset(env_groups)
        fit = fit_line(points)
        click.echo(
            f"{env}: n={len(points)}  slope {_fmt(fit.slope)}  intercept {_fmt(fit.intercept)}"
            f"  pearson {_fmt(fit.pearson_r)}  r_score {_fmt(fit.r_score)}"
        )
        if check:
            if env not in REFERENCE_FITS:
                failures.append(f"{env}: no reference fit to compare against")
                continue
            deltas = check_fit(fit, REFERENCE_FITS[env])
            for name, delta in deltas.items():
                tolerance = CHECK_TOLERANCES[name]
                status = "ok" if delta <= tolerance else "FAIL"
                click.echo(f"    {name:<10s} delta {delta:.3g} (tolerance {tolerance:g}) {status}")
                if delta > tolerance:
                    failures.append(f"{env}.{name}: delta {delta:.3g} > {tolerance:g}")
    if check:
        if failures:
            raise click.ClickException("reference check failed: " + "; ".join(failures))
        click.echo("reference check: all fits within tolerance")


@main.command()
@click.argument("scene_file", required=False,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--k", "k_override", type=float, default=None,
              help="Override the fixture's environment coefficient.")
@click.option("--hours", type=float, default=None,
              help="Override the fixture's exposure time.")
def simulate_cmd(scene_file: str | None, trials: int, seed: int,
                 k_override: float | None, hours: float | None) -> None:
    """Cross-check the closed form against Monte Carlo on a grid scene."""
    path = Path(scene_file) if scene_file else _DATA_DIR / "crossing.scene"
    try:
        fixture = load_scene_fixture(path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(str(exc)) from None
    k = k_override if k_override is not None else fixture.k
    walk = fixture.path
    if hours is not None:
        walk = straight_path(fixture.scene, hours, row=fixture.path_row)
    try:
        closed = closed_form_path_probability(fixture.scene, walk, k)
        estimate, std_error = simulate(fixture.scene, walk, k, trials, seed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    sigma = abs(estimate - closed) / std_error if std_error > 0 else 0.0
    click.echo(f"scene {path} ({fixture.scene.grid_cols}x{fixture.scene.grid_rows}, "
               f"{len(fixture.scene.carriers)} carriers, k {_fmt(k)})")
    click.echo(f"closed form      {_fmt(closed)}")
    click.echo(f"monte carlo      {_fmt(estimate)}  (std error {_fmt(std_error)}, "
               f"{trials} trials, seed {seed})")
    click.echo(f"deviation        {_fmt(sigma)} standard errors")


# click would otherwise register the command as "simulate-cmd"
main.add_command(simulate_cmd, name="simulate")


@main.command()
@click.option("--width", type=float, default=4.0, show_default=True,
              help="Corridor width in meters.")
@click.option("--hours", type=float, default=1.0, show_default=True,
              help="Exposure time in hours.")
@click.option("--lengths", default="4,6,8,10,15,20,30,50,75,100", show_default=True,
              help="Comma-separated corridor lengths in meters.")
@click.option("--densities", default="0.5,1,2,3", show_default=True,
              help="Comma-separated crowd densities in persons per square meter.")
@click.option("--activity", default="moderate", show_default=True,
              type=click.Choice(sorted(ACTIVITY_LEVELS)))
@click.option("--prevalence", type=float, default=None,
              help="Override the infectious population fraction.")
@click.option("--cap", type=float, default=20.0, show_default=True,
              help="Interaction length cap in meters.")
@click.option("--presets", "presets_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Write CSV here instead of stdout.")
def sweep(width: float, hours: float, lengths: str, densities: str, activity: str,
          prevalence: float | None, cap: float, presets_file: str | None,
          output: str | None) -> None:
    """Emit walking-risk curve data (CSV) over corridor length and density."""
    presets = _load_bundle(presets_file)
    try:
        lengths_m = [float(part) for part in lengths.split(",") if part.strip()]
        densities_per_m2 = [float(part) for part in densities.split(",") if part.strip()]
    except ValueError:
        raise click.UsageError("lengths and densities must be comma-separated numbers") from None
    try:
        points = walking_sweep(
            width, lengths_m, densities_per_m2, hours, ACTIVITY_LEVELS[activity],
            presets=presets, prevalence=prevalence, interaction_cap_m=cap,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    lines = ["length_m,density_per_m2,probability"]
    lines += [
        f"{p.length_m:g},{p.density_per_m2:g},{p.probability:.6g}" for p in points
    ]
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text)
        click.echo(f"wrote {len(points)} points to {output}")
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--port", type=int, default=8000, envvar="ROUTERISK_PORT",
              show_default=True, help="Port (env ROUTERISK_PORT overrides the default).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--presets", "presets_file", type=click.Path(exists=True, dir_okay=False))
def serve(port: int, host: str, presets_file: str | None) -> None:
    """Run the HTTP scoring service."""
    import uvicorn

    from .service import create_app

    app = create_app(presets_path=presets_file)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
