#!/usr/bin/env python3
"""
qkmech - Main CLI Entry Point
Quaternionic Kaehler Lagrangian mechanics on R^{4n}: structure checks,
derivations, simulations and the identity validation suite.

Exit codes: 0 success, 1 runtime or numerical failure, 2 usage or parse failure.
"""

import json
import sys
from pathlib import Path

import click
import numpy as np

from config.settings import SWEEP_SUMMARY_NAME
from src.app.flow.integrator import integrate, integrate_batch
from src.app.flow.output import sanitize, summary_payload, write_json, write_summary_json, write_trajectory_csv
from src.app.geometry.forms import MetricTensor, metric_compatibility
from src.app.geometry.structure import (
    ChartDim,
    StructureKind,
    build_all,
    build_structure,
    format_matrix,
    random_unit_vector,
    verify_relations,
)
from src.app.services.cli_interface import CLIInterface
from src.app.services.derivation import derive as derive_chain
from src.app.services.run_config import build_run_config, parse_vector
from src.app.services.validation import run_validation
from src.core.errors import ConfigError, DimensionError, IntegrationError, ParseError, QKMechError
from src.core.logger import configure_logging, get_logger


_log = get_logger("cli")


def _exit_code(exc: Exception) -> int:
    return 2 if isinstance(exc, (ParseError, ConfigError, DimensionError)) else 1


def _fail(ui: CLIInterface, exc: Exception, command: str):
    """Report an error raised inside a command and exit with its code."""
    if isinstance(exc, ParseError):
        ui.show_parse_error(exc)
    else:
        ui.print_error(str(exc))
    _log.exception("%s command failed", command)
    sys.exit(_exit_code(exc))


def _echo_json(payload: dict):
    click.echo(json.dumps(sanitize(payload), indent=2, allow_nan=False))


def run_options(f):
    """Options shared by derive, simulate and validate."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                     help="Config file with key = value lines."),
        click.option("--n", type=click.IntRange(min=1), default=None, help="Block size n (chart is R^{4n})."),
        click.option("--structure", type=click.Choice(["F", "G", "H"], case_sensitive=False), default=None),
        click.option("--builtin", default=None, help="Built-in Lagrangian as name:params, e.g. gravity:1,9.8."),
        click.option("--lagrangian-expr", default=None, help="Lagrangian expression in x0..x{4n-1}."),
        click.option("--x0", default=None, help="Point or initial state, comma separated."),
        click.option("--seed", type=int, default=None),
        click.option("--json", "as_json", is_flag=True, help="Print machine-readable JSON."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


@click.group()
def cli():
    """qkmech - Lagrangian mechanics on quaternionic Kaehler charts."""
    configure_logging()


@cli.command()
@click.option("--n", type=click.IntRange(min=1), default=1, show_default=True, help="Block size n.")
@click.option("--dump-matrix", type=click.Choice(["F", "G", "H"], case_sensitive=False), default=None,
              help="Print the signed matrix of one operator.")
@click.option("--metric-diag", default=None, help="Also check a diagonal metric, 4n comma-separated weights.")
@click.option("--json", "as_json", is_flag=True, help="Print machine-readable JSON.")
def check(n, dump_matrix, metric_diag, as_json):
    """
    Verify the quaternion relations of F, G, H and metric compatibility.

    Example:
        python main.py check --n 4 --dump-matrix F
    """
    ui = CLIInterface()
    dim = ChartDim(n)
    _log.info("check started for n=%d", n)
    try:
        metrics = [("identity", MetricTensor.identity(dim))]
        if metric_diag is not None:
            weights = parse_vector(metric_diag, "metric-diag")
            if weights.shape != (dim.total,):
                raise DimensionError(f"metric-diag has {weights.size} entries but 4n={dim.total}")
            try:
                metrics.append((f"diag({metric_diag})", MetricTensor.diagonal(weights)))
            except ValueError as e:
                raise ConfigError(f"metric-diag: {e}") from None
    except QKMechError as e:
        _fail(ui, e, "check")

    report = verify_relations(dim)
    operators = build_all(dim)
    metric_results = [
        (label, [(kind, metric_compatibility(g, J)) for kind, J in operators.items()])
        for label, g in metrics
    ]
    passed = report.all_passed and all(r.compatible for _, results in metric_results for _, r in results)

    dumped = None
    if dump_matrix is not None:
        kind = StructureKind.parse(dump_matrix)
        dumped = (kind, build_structure(kind, dim).matrix())

    if as_json:
        _echo_json({
            "n": n,
            "relations": [{"name": c.name, "passed": c.passed, "violation": c.violation} for c in report.checks],
            "metrics": [
                {"metric": label,
                 "checks": [{"structure": str(k), "compatible": r.compatible, "violation": r.violation}
                            for k, r in results]}
                for label, results in metric_results
            ],
            "all_passed": passed,
            "matrix": {"structure": str(dumped[0]), "rows": dumped[1].tolist()} if dumped else None,
        })
    else:
        ui.show_relation_report(report)
        for label, results in metric_results:
            ui.show_metric_checks(label, results)

    if dumped and not as_json:
        ui.print_header(f"{dumped[0]} ({dim.total}x{dim.total})")
        click.echo(format_matrix(dumped[1]))

    if not passed:
        _log.warning("check failed for n=%d", n)
        if not as_json:
            ui.print_error("Some relations or compatibility checks failed")
        sys.exit(1)
    if not as_json:
        ui.print_success("All relations hold")


@cli.command()
@run_options
def derive(config_path, as_json, **flags):
    """
    Print the derivation chain for a Lagrangian at a point.

    Hessian, gradient, d_J L, the Kaehler two-form, the semispray xi,
    the energy and its differential, and the Euler-Lagrange residual.

    Example:
        python main.py derive --builtin free_quadratic:1 --x0 1,0,0,0
    """
    ui = CLIInterface()
    try:
        run = build_run_config(config_path, **flags)
        L = run.lagrangian()
        derivation = derive_chain(L, run.operator(), run.initial_state())
    except QKMechError as e:
        _fail(ui, e, "derive")

    if as_json:
        _echo_json({"derivation": derivation.to_dict(), "config": run.to_dict()})
    else:
        ui.show_derivation(derivation)


@cli.command()
@run_options
@click.option("--dt", type=float, default=None, help="Step (rk4) or first trial step (rk45).")
@click.option("--t-end", type=float, default=None)
@click.option("--method", type=click.Choice(["rk4", "rk45", "rk45_adaptive"]), default=None)
@click.option("--abs-tol", type=float, default=None)
@click.option("--rel-tol", type=float, default=None)
@click.option("--dt-min", type=float, default=None)
@click.option("--dt-max", type=float, default=None)
@click.option("--out", type=click.Path(), default=None,
              help="Trajectory CSV path (the summary goes next to it as .json); a directory with --sweep.")
@click.option("--sweep", type=click.IntRange(min=1), default=None,
              help="Run this many seeded random unit initial conditions concurrently.")
def simulate(config_path, as_json, sweep, **flags):
    """
    Integrate Hess(L) x' = J grad L and write the trajectory.

    Example:
        python main.py simulate --builtin free_quadratic:1 --x0 1,0,0,0 --out run.csv
    """
    ui = CLIInterface()
    try:
        run = build_run_config(config_path, **flags)
        L = run.lagrangian()
        J = run.operator()
    except QKMechError as e:
        _fail(ui, e, "simulate")

    if sweep is not None:
        _simulate_sweep(ui, run, L, J, sweep, as_json)
        return

    csv_path = run.trajectory_path()
    json_path = csv_path.with_suffix(".json")
    try:
        trajectory, report = integrate(L, J, run.initial_state(), run.integrator)
    except IntegrationError as e:
        write_trajectory_csv(csv_path, e.trajectory, run.dim)
        write_summary_json(json_path, e.report, run.to_dict(), "failed", str(e))
        ui.print_error(str(e))
        ui.print_info(f"Partial trajectory ({len(e.trajectory)} samples) written to {csv_path}")
        _log.exception("simulate command failed")
        sys.exit(1)
    except QKMechError as e:
        _fail(ui, e, "simulate")

    write_trajectory_csv(csv_path, trajectory, run.dim)
    write_summary_json(json_path, report, run.to_dict())
    if as_json:
        _echo_json(summary_payload(report, run.to_dict()))
    else:
        ui.show_drift_report(report, J.kind, csv_path)
        ui.print_success(
            f"{report.steps} steps, energy drift {report.max_energy_drift_rel:.3e}, "
            f"max residual {report.max_residual:.3e}, worst cond {report.worst_cond:.3e}"
        )


def _simulate_sweep(ui, run, L, J, count: int, as_json: bool):
    rng = np.random.default_rng(run.seed)
    x0s = [random_unit_vector(rng, run.dim) for _ in range(count)]
    results = integrate_batch(L, J, x0s, run.integrator)

    out_dir = Path(run.sweep_dir())
    rows = []
    for i, (x0, result) in enumerate(zip(x0s, results)):
        csv_path = out_dir / f"run_{i:03d}.csv"
        if isinstance(result, IntegrationError):
            trajectory, report = result.trajectory, result.report
            status, error = "failed", str(result)
        else:
            (trajectory, report), status, error = result, "completed", None
        write_trajectory_csv(csv_path, trajectory, run.dim)
        rows.append({
            "run": i,
            "x0": x0.tolist(),
            "csv": csv_path.name,
            "status": status,
            "error": error,
            "report": report.to_dict() if report is not None else None,
        })

    summary = {"runs": rows, "config": run.to_dict()}
    write_json(out_dir / SWEEP_SUMMARY_NAME, summary)
    failed = [row["run"] for row in rows if row["status"] != "completed"]
    _log.info("sweep of %d runs finished, %d failed", count, len(failed))

    if as_json:
        _echo_json(summary)
    else:
        ui.show_sweep(sanitize(rows))
        ui.print_info(f"Summary written to {out_dir / SWEEP_SUMMARY_NAME}")
    if failed:
        if not as_json:
            ui.print_error(f"{len(failed)} of {count} runs failed: {', '.join(map(str, failed))}")
        sys.exit(1)


@cli.command()
@run_options
@click.option("--points", type=click.IntRange(min=1), default=None, help="Number of seeded random points.")
@click.option("--tolerance", type=float, default=None, help="Replace every check tolerance with this value.")
def validate(config_path, as_json, **flags):
    """
    Run the identity suite at seeded random points.

    Example:
        python main.py validate --builtin gravity:1,9.8 --points 50
    """
    ui = CLIInterface()
    try:
        run = build_run_config(config_path, **flags)
        L = run.lagrangian()
        report = run_validation(L, run.points, run.seed, run.tolerance)
    except QKMechError as e:
        _fail(ui, e, "validate")

    if as_json:
        _echo_json({"report": report.to_dict(), "config": run.to_dict()})
    else:
        ui.show_validation_report(report)

    failure = report.first_failure
    if failure is not None:
        if not as_json:
            ui.print_error(
                f"first failing check: {failure.name} ({failure.max_violation:.3e} > {failure.tolerance:.1e})"
            )
        sys.exit(1)
    if not as_json:
        ui.print_success("All identities hold")


if __name__ == "__main__":
    cli()
