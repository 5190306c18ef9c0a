"""Command-line interface.

Subcommands: run, calibrate, analyze, render, compare-discharge, paths.
Exit codes: 0 success, 1 validation error, 2 run failure, 3 check
failure (an analysis threshold or comparison verdict not met).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import run as runner
from .analysis import build_report
from .calibration import calibrate_bias
from .paths import UnknownPathError, builtin_paths
from .render import render_trace
from .scenario import Scenario, ScenarioError, default_scenario, load_scenario
from .trace import RunTrace, read_bead_json, read_trace_csv

EXIT_VALIDATION = 1
EXIT_RUN_FAILURE = 2
EXIT_CHECK_FAILURE = 3


def _load_scenario(scenario_path: str | None, path_name: str | None) -> Scenario:
    try:
        if scenario_path is not None:
            scenario = load_scenario(scenario_path)
            if path_name is not None:
                raise ScenarioError("give either --scenario or --path, not both")
            return scenario
        return default_scenario(path_name or "square10cm")
    except (ScenarioError, UnknownPathError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _report_payload(scenario: Scenario, trace: RunTrace, seed: int) -> dict:
    payload = {
        "scenario": scenario.name,
        "seed": seed,
        "status": trace.status,
        "detail": trace.detail,
    }
    try:
        report = build_report(
            trace,
            scenario.mission.target_polylines(),
            scenario.mission.corners(),
        )
        payload.update(report.to_dict())
    except ValueError as exc:
        payload["analysis_error"] = str(exc)
    return payload


@click.group()
def main() -> None:
    """Simulate a hexacopter that slides on a build surface while printing."""


@main.command(name="run")
@click.option("--scenario", "scenario_path", type=click.Path(), help="Scenario TOML file.")
@click.option("--path", "path_name", help="Built-in path for a default scenario.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Output directory (default: runs/<name>).")
def run_cmd(scenario_path, path_name, seed, out_dir) -> None:
    """Run one scenario and write trace, bead, report and render."""
    scenario = _load_scenario(scenario_path, path_name)
    seed_used = seed if seed is not None else scenario.seed
    out = Path(out_dir or scenario.outputs or f"runs/{scenario.name}")
    try:
        trace = runner.run_scenario(scenario, out_dir=out, seed=seed_used)
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    payload = _report_payload(scenario, trace, seed_used)
    _write_json(out / "report.json", payload)
    svg = render_trace(trace, scenario.mission.target_polylines(),
                       title=f"{scenario.name} (seed {seed_used})")
    (out / "render.svg").write_text(svg)

    click.echo(f"status: {trace.status}" + (f" ({trace.detail})" if trace.detail else ""))
    if "max_deviation_m" in payload:
        click.echo(f"max deviation: {payload['max_deviation_m'] * 1000:.2f} mm")
        click.echo(f"clump ratios: "
                   + ", ".join(f"{r:.2f}" for r in payload["clump_ratios"]))
    click.echo(f"outputs: {out}")
    if not trace.succeeded:
        sys.exit(EXIT_RUN_FAILURE)


@main.command()
@click.option("--scenario", "scenario_path", type=click.Path(),
              help="Scenario TOML providing the world parameters.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for calibration.json.")
def calibrate(scenario_path, out_dir) -> None:
    """Find the roll/pitch biases that cancel the estimation offset."""
    scenario = _load_scenario(scenario_path, None)
    result = calibrate_bias(scenario.world)
    click.echo(f"beta_phi:   {result.beta_phi:+.4f} deg")
    click.echo(f"beta_theta: {result.beta_theta:+.4f} deg")
    click.echo(f"iterations: {result.iterations}"
               + ("" if result.converged else " (did not converge)"))
    click.echo(f"final drift: {result.drift_history[-1]:.5f} m/s")
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(out / "calibration.json", {
            "beta_phi_deg": result.beta_phi,
            "beta_theta_deg": result.beta_theta,
            "iterations": result.iterations,
            "converged": result.converged,
            "drift_history_mps": result.drift_history,
        })
    if not result.converged:
        sys.exit(EXIT_RUN_FAILURE)


def _load_run(run_dir: Path) -> RunTrace:
    try:
        records = read_trace_csv(run_dir / "trace.csv")
        bead, status = read_bead_json(run_dir / "bead.json")
    except (OSError, ValueError, KeyError) as exc:
        click.echo(f"error: cannot read run directory {run_dir}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    return RunTrace(records=records, bead=bead, status=status)


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--scenario", "scenario_path", type=click.Path(), help="Scenario TOML file.")
@click.option("--path", "path_name", help="Built-in path the run printed.")
@click.option("--max-deviation-m", type=float, default=None,
              help="Fail (exit 3) when max deviation exceeds this.")
def analyze(run_dir, scenario_path, path_name, max_deviation_m) -> None:
    """Recompute the report for a saved run directory."""
    scenario = _load_scenario(scenario_path, path_name)
    trace = _load_run(Path(run_dir))
    payload = _report_payload(scenario, trace, seed=scenario.seed)
    _write_json(Path(run_dir) / "report.json", payload)
    for key, value in payload.items():
        click.echo(f"{key}: {value}")
    if "analysis_error" in payload:
        sys.exit(EXIT_RUN_FAILURE)
    if max_deviation_m is not None and payload["max_deviation_m"] > max_deviation_m:
        click.echo(f"check failed: max deviation {payload['max_deviation_m']:.4f} m "
                   f"> {max_deviation_m} m", err=True)
        sys.exit(EXIT_CHECK_FAILURE)


@main.command()
@click.argument("run_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--scenario", "scenario_path", type=click.Path(), help="Scenario TOML file.")
@click.option("--path", "path_name", help="Built-in path to overlay.")
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="SVG file (default: <run_dir>/render.svg).")
def render(run_dir, scenario_path, path_name, out_file) -> None:
    """Render a saved run to SVG."""
    scenario = _load_scenario(scenario_path, path_name)
    trace = _load_run(Path(run_dir))
    svg = render_trace(trace, scenario.mission.target_polylines(), title=scenario.name)
    target = Path(out_file) if out_file else Path(run_dir) / "render.svg"
    target.write_text(svg)
    click.echo(f"wrote {target}")


@main.command(name="compare-discharge")
@click.option("--scenario", "scenario_path", type=click.Path(), required=True,
              help="Discharge scenario TOML file.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Output directory (default: runs/<name>-compare).")
def compare_discharge_cmd(scenario_path, seed, out_dir) -> None:
    """Run a mission compensated and constant-command, compare friction."""
    scenario = _load_scenario(scenario_path, None)
    seed_used = seed if seed is not None else scenario.seed
    try:
        report, trace_comp, trace_const = runner.compare_discharge(scenario, seed=seed_used)
    except ScenarioError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    out = Path(out_dir or f"runs/{scenario.name}-compare")
    out.mkdir(parents=True, exist_ok=True)
    from .trace import write_bead_json, write_trace_csv
    for name, trace in (("compensated", trace_comp), ("constant", trace_const)):
        sub = out / name
        sub.mkdir(exist_ok=True)
        write_trace_csv(trace, sub / "trace.csv")
        write_bead_json(trace, sub / "bead.json")
    _write_json(out / "comparison.json", report.to_dict())

    def show(label: str, variation: float | None, status: str) -> None:
        text = f"{variation:.3f}%" if variation is not None else "n/a"
        click.echo(f"{label:<12} friction variation {text:<10} status {status}")

    show("compensated", report.compensated_variation, report.compensated_status)
    show("constant", report.constant_variation, report.constant_status)
    if report.verdict is None:
        click.echo("comparison incomplete", err=True)
        sys.exit(EXIT_RUN_FAILURE)
    click.echo("compensation reduces friction variation: "
               + ("yes" if report.verdict else "no"))
    if not report.verdict:
        sys.exit(EXIT_CHECK_FAILURE)


@main.command(name="paths")
@click.option("--path", "path_name", default=None, help="Show one path in detail.")
def paths_cmd(path_name) -> None:
    """List the built-in print paths."""
    library = builtin_paths()
    if path_name is not None:
        if path_name not in library:
            click.echo(f"error: {UnknownPathError(path_name, list(library))}", err=True)
            sys.exit(EXIT_VALIDATION)
        path = library[path_name]
        click.echo(f"{path.name}: start {path.start}")
        for leg in path.legs:
            flag = "extrude" if leg.extrude else "travel"
            click.echo(f"  -> {leg.target}  [{flag}]")
        click.echo(f"extruded length: {path.total_extruded_length() * 100:.1f} cm")
        return
    for name, path in library.items():
        click.echo(f"{name:<12} {len(path.waypoints())} waypoints, "
                   f"{path.total_extruded_length() * 100:.1f} cm extruded")


if __name__ == "__main__":
    main()
