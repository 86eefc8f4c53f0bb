"""Report formatting, display and serialisation.

CSV and JSON payloads are built here; the console tables mirror them for
interactive runs.
"""

from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import typer
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from .config import settings
from .data_utils import atomic_write, csv_text, to_json
from .estimators import DensityEstimate, PEstimate
from .lab.lowerbound import DivergenceRow
from .lab.simulate import RateFit, RiskReport
from .tuning import RateDescriptor

console = Console()

DENSITY_HEADER = ["x", "f_hat"]
RISK_HEADER = ["n", "risk_mean", "risk_se", "replicates"]
DIVERGENCE_HEADER = ["delta", "n", "chi_sq", "n_times_chi_sq", "separation", "tail_bound"]


def p_estimate_payload(estimate: PEstimate) -> Dict[str, Any]:
    return {
        "p_raw": estimate.p_raw,
        "p_clamped": estimate.p_clamped,
        "p_plus": estimate.p_plus,
        "g": estimate.g,
        "epsilon": estimate.epsilon,
        "n": estimate.n,
    }


def density_csv(estimate: DensityEstimate) -> str:
    rows = [[float(x), float(f)] for x, f in zip(estimate.grid, estimate.values)]
    return csv_text(DENSITY_HEADER, rows)


def risk_csv(report: RiskReport) -> str:
    rows = [
        [row.n, row.risk_mean, row.risk_se, row.replicates] for row in report.rows
    ]
    return csv_text(RISK_HEADER, rows)


def risk_metadata(
    report: RiskReport,
    fit: Optional[RateFit],
    theoretical: Optional[RateDescriptor],
    non_increasing: bool,
) -> Dict[str, Any]:
    """JSON sidecar describing a Monte-Carlo run."""

    return {
        "preset": report.preset.value,
        "seed": report.seed,
        "model": report.model,
        "quantity": report.quantity.value,
        "variant": report.variant.value if report.variant else None,
        "slope": fit.slope if fit else None,
        "intercept": fit.intercept if fit else None,
        "r_squared": fit.r_squared if fit else None,
        "theoretical_scale": theoretical.scale.value if theoretical else None,
        "theoretical_exponent": theoretical.exponent if theoretical else None,
        "non_increasing": non_increasing,
        "dominance_violations": report.dominance_violations,
        "diagnostics": list(report.diagnostics),
    }


def divergence_csv(rows: Sequence[DivergenceRow]) -> str:
    body = [
        [
            row.delta,
            row.n,
            row.chi_sq,
            row.n_times_chi_sq,
            row.separation,
            row.tail_bound,
        ]
        for row in rows
    ]
    return csv_text(DIVERGENCE_HEADER, body)


def sidecar_path(output: Path) -> Path:
    """``<stem>.json`` next to ``output``."""
    return output.with_suffix(".json")


def emit(content: str, output: Optional[Path]) -> None:
    """Write a machine payload to ``output`` atomically, or to stdout alone."""

    if output is None:
        typer.echo(content, nl=False)
    else:
        atomic_write(output, content)


class ReportFormatter:
    """Formats and displays command results."""

    def __init__(self, output_format: str = "table"):
        self.output_format = output_format
        self.config = settings

    def display_results(self, results: Dict[str, Any], verbose: bool = False) -> None:
        """Display results in the specified format."""

        if self.output_format == "json":
            self._display_json(results)
        else:  # table format
            self._display_table(results, verbose)

    def _display_table(self, results: Dict[str, Any], verbose: bool) -> None:
        kind = results.get("kind")
        if kind == "kernel":
            self._display_kernel_results(results)
        elif kind == "rates":
            self._display_rate_results(results, verbose)
        elif kind == "lowerbound":
            self._display_divergence_results(results, verbose)
        else:
            console.print(Panel(self._format_mapping(results), title="Result"))

    def _display_kernel_results(self, results: Dict[str, Any]) -> None:
        console.print(
            Panel(
                f"[bold blue]Kernel Validity[/bold blue]\n"
                f"Kernel: [cyan]{results['kernel']}[/cyan] ({results['kind_label']})\n"
                f"alpha: [yellow]{self._format_number(results['alpha'])}[/yellow]",
                title="🧮 Kernel",
            )
        )
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("Constant", style="cyan", min_width=self.config.table_widths.CONSTANT)
        table.add_column("Value", justify="right")
        for name, value in results["constants"].items():
            table.add_row(name, self._format_number(value))
        console.print(table)

    def _display_rate_results(self, results: Dict[str, Any], verbose: bool) -> None:
        report: RiskReport = results["report"]
        widths = self.config.table_widths
        label = "MSE" if report.quantity.value == "atom_p" else "MISE"

        console.print(
            Panel(
                f"[bold blue]Monte-Carlo Risk[/bold blue]\n"
                f"Preset: [cyan]{report.preset.value}[/cyan]\n"
                f"Model: [cyan]{self._format_mapping(report.model)}[/cyan]\n"
                f"Seed: [yellow]{report.seed}[/yellow]",
                title="📈 Rates",
            )
        )
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("n", justify="right", min_width=widths.N)
        table.add_column(label, justify="right", min_width=widths.RISK)
        table.add_column("SE", justify="right", min_width=widths.RISK)
        table.add_column("Replicates", justify="right", min_width=widths.REPLICATES)
        for row in report.rows:
            table.add_row(
                str(row.n),
                self._format_number(row.risk_mean),
                self._format_number(row.risk_se),
                str(row.replicates),
            )
        console.print(table)

        metadata = results["metadata"]
        if metadata.get("slope") is not None:
            console.print(
                f"\nFitted slope: [bold]{self._format_number(metadata['slope'])}[/bold]"
                f" (r² {self._format_number(metadata['r_squared'])})"
            )
        if metadata.get("theoretical_exponent") is not None:
            console.print(
                f"Theoretical exponent: {self._format_number(metadata['theoretical_exponent'])}"
                f" ({metadata['theoretical_scale']})"
            )
        verdict = "[green]yes[/green]" if metadata["non_increasing"] else "[red]no[/red]"
        console.print(f"Risk non-increasing in n: {verdict}")

        if report.diagnostics:
            console.print(f"\n[bold red]Aborted rows:[/bold red]")
            for message in report.diagnostics:
                console.print(f"   • {message}")
        if verbose and report.variant is not None:
            console.print(
                f"\n[dim]Positive-part dominance violations: "
                f"{report.dominance_violations}[/dim]"
            )

    def _display_divergence_results(self, results: Dict[str, Any], verbose: bool) -> None:
        rows: List[DivergenceRow] = results["rows"]
        widths = self.config.table_widths

        console.print(f"\n[bold green]🔬 Two-Alternative Divergences[/bold green]")
        table = Table(show_header=True, header_style="bold magenta")
        table.add_column("delta", justify="right", min_width=widths.DELTA)
        table.add_column("n", justify="right", min_width=widths.N)
        table.add_column("chi²", justify="right", min_width=widths.CHI_SQ)
        table.add_column("n·chi²", justify="right", min_width=widths.CHI_SQ)
        table.add_column("|p2 - p1|", justify="right", min_width=widths.CHI_SQ)
        if verbose:
            table.add_column("Tail bound", justify="right", min_width=widths.CHI_SQ)
        for row in rows:
            cells = [
                self._format_number(row.delta),
                "" if row.n is None else str(row.n),
                self._format_number(row.chi_sq),
                self._format_number(row.n_times_chi_sq),
                self._format_number(row.separation),
            ]
            if verbose:
                cells.append(self._format_number(row.tail_bound))
            table.add_row(*cells)
        console.print(table)

        slope = results.get("slope")
        if slope is not None:
            console.print(f"\nlog chi² vs log delta slope: [bold]{self._format_number(slope)}[/bold]")

    def _format_number(self, value: Optional[float]) -> str:
        if value is None:
            return "-"
        return f"{value:.{self.config.display.TABLE_DIGITS}g}"

    def _format_mapping(self, values: Dict[str, Any]) -> str:
        return ", ".join(f"{key}={value}" for key, value in values.items())

    def _display_json(self, results: Dict[str, Any]) -> None:
        """Display results as JSON."""
        typer.echo(to_json(self._convert_for_json(results)), nl=False)

    def _convert_for_json(self, obj: Any) -> Any:
        """Convert objects to JSON-serializable format."""
        if isinstance(obj, dict):
            return {k: self._convert_for_json(v) for k, v in obj.items()}
        elif isinstance(obj, (list, tuple)):
            return [self._convert_for_json(item) for item in obj]
        elif is_dataclass(obj) and not isinstance(obj, type):
            return self._convert_for_json(asdict(obj))
        return obj
