"""
Terminal reporting for the qkmech commands.
Uses rich for styled output.
"""

from typing import List, Optional

import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from src.app.flow.integrator import DriftReport
from src.app.geometry.structure import RelationReport, StructureKind
from src.app.services.derivation import Derivation
from src.app.services.validation import ValidationReport
from src.core.errors import ParseError


console = Console()


def _vec(v) -> str:
    return "(" + ", ".join(f"{float(x) + 0.0:.6g}" for x in np.asarray(v).ravel()) + ")"


class CLIInterface:
    """Handles command-line output."""

    def __init__(self, output: Optional[Console] = None):
        self.console = output or console

    def print_header(self, text: str):
        """Print a styled header."""
        self.console.print(f"\n[bold cyan]{escape(text)}[/bold cyan]")
        self.console.print("=" * len(text))

    def print_success(self, text: str):
        self.console.print(f"[green]✓[/green] {escape(text)}")

    def print_warning(self, text: str):
        self.console.print(f"[yellow]⚠[/yellow] {escape(text)}")

    def print_error(self, text: str):
        self.console.print(f"[red]✗[/red] {escape(text)}")

    def print_info(self, text: str):
        self.console.print(f"[blue]→[/blue] {escape(text)}")

    def print_plain(self, text: str):
        """Print without markup or highlighting (matrices, annotated sources)."""
        self.console.print(text, markup=False, highlight=False, soft_wrap=True)

    def show_parse_error(self, exc: ParseError):
        self.print_error("Could not parse the Lagrangian expression")
        self.print_plain(exc.annotate())

    def show_relation_report(self, report: RelationReport):
        """
        Display the quaternion relation checks.

        Args:
            report: Report from verify_relations
        """
        self.print_header(f"Quaternion relations (n={report.dim.n}, 4n={report.dim.total})")

        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Check")
        table.add_column("Violation", justify="right")
        table.add_column("Result")
        for check in report.checks:
            result = "[green]pass[/green]" if check.passed else "[red]FAIL[/red]"
            table.add_row(escape(check.name), str(check.violation), result)
        self.console.print(table)

    def show_metric_checks(self, label: str, checks: List[tuple]):
        """
        Display metric compatibility per structure.

        Args:
            label: Which metric was checked
            checks: (StructureKind, Compatibility) pairs
        """
        self.print_header(f"Metric compatibility: {label}")
        for kind, result in checks:
            text = f"{kind}: violation {result.violation:.3e}"
            if result.compatible:
                self.print_success(text)
            else:
                self.print_error(text)

    def show_matrix(self, title: str, rendered: str):
        self.print_header(title)
        self.print_plain(rendered)

    def show_derivation(self, d: Derivation):
        """Print every object of the derivation chain."""
        self.print_header(f"Derivation: {d.lagrangian}, structure {d.structure}")
        self.print_info(f"point x = {_vec(d.point)}")
        if d.kinetic is not None:
            self.print_info(f"T = {d.kinetic:.17g}, P = {d.potential:.17g}, L = T - P = {d.value:.17g}")
        else:
            self.print_info(f"L = {d.value:.17g}")
        self.print_info(f"grad L = {_vec(d.gradient)}")
        self.show_matrix("Hessian", _format_real_matrix(d.hessian))
        self.print_info(f"d_J L = {_vec(d.vertical_differential)}")
        self.show_matrix("Kaehler two-form matrix", _format_real_matrix(d.phi))

        self.print_header("Semispray")
        self.print_info(f"xi = {_vec(d.velocity)}")
        self.print_info(f"Liouville field V_J = {_vec(d.liouville)}")
        self.print_info(f"E = {d.energy:.17g}")
        self.print_info(f"dE = {_vec(d.energy_differential)}")
        for b, block in enumerate(d.residual_blocks):
            self.print_info(f"residual block {b} = {_vec(block)}")
        self.print_info(f"residual norm = {d.residual_norm:.3e}")
        self.print_info(f"Hessian condition estimate = {d.condition:.3e}")
        if d.literal_deviation is not None:
            self.print_info(f"bracketed system deviation = {d.literal_deviation:.3e}")

    def show_drift_report(self, report: DriftReport, structure: StructureKind, csv_path=None):
        """
        Display a one-run summary.

        Args:
            report: Drift report of the run
            structure: Structure the run used
            csv_path: Where the trajectory was written, if anywhere
        """
        panel_content = f"""[bold]{report.steps} steps to t = {report.final_time:.6g}[/bold] (structure {structure})

[dim]Energy drift (rel):[/dim] {report.max_energy_drift_rel:.3e}
[dim]Norm drift (rel):[/dim] {report.max_norm_drift_rel:.3e}
[dim]Max EL residual:[/dim] {report.max_residual:.3e}
[dim]Worst Hessian condition:[/dim] {report.worst_cond:.3e}"""
        if csv_path is not None:
            panel_content += f"\n[dim]Trajectory:[/dim] {escape(str(csv_path))}"

        self.console.print(Panel(panel_content, title="Simulation", border_style="green"))

    def show_sweep(self, rows: List[dict]):
        """One table row per sweep run."""
        self.print_header("Sweep")
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Run", style="dim", width=6)
        table.add_column("Status")
        table.add_column("Energy drift", justify="right")
        table.add_column("Max residual", justify="right")
        for row in rows:
            report = row.get("report") or {}
            drift = report.get("max_energy_drift_rel")
            residual = report.get("max_residual")
            status = "[green]completed[/green]" if row["status"] == "completed" else "[red]failed[/red]"
            table.add_row(
                str(row["run"]),
                status,
                f"{drift:.3e}" if drift is not None else "-",
                f"{residual:.3e}" if residual is not None else "-",
            )
        self.console.print(table)

    def show_validation_report(self, report: ValidationReport):
        """Display per-check maximum violations against their tolerances."""
        self.print_header(
            f"Validation: {report.lagrangian}, n={report.n}, {report.points} points, seed {report.seed}"
        )
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Check")
        table.add_column("Max violation", justify="right")
        table.add_column("Tolerance", justify="right")
        table.add_column("Samples", justify="right")
        table.add_column("Skipped", justify="right")
        table.add_column("Result")
        for c in report.checks:
            result = "[green]pass[/green]" if c.passed else "[red]FAIL[/red]"
            table.add_row(c.name, f"{c.max_violation:.3e}", f"{c.tolerance:.1e}",
                          str(c.samples), str(c.skipped), result)
        self.console.print(table)


def _format_real_matrix(m: np.ndarray) -> str:
    return "\n".join(" ".join(f"{float(v) + 0.0: .6g}" for v in row) for row in np.asarray(m))
