"""UI utilities for terminal output."""

from typing import Any, Optional, Sequence

from rich.console import Console
from rich.table import Table

from handheadkit.analysis.stats import WilcoxonResult
from handheadkit.core.models import ClusterResult, EvalReport, ProbeReport, Recording


def format_recordings_table(recordings: Sequence[Recording]) -> Table:
    """
    Format recordings as a Rich table.

    Args:
        recordings: Loaded recordings

    Returns:
        Rich Table object
    """
    table = Table(title="Recordings", show_header=True, header_style="bold cyan")
    table.add_column("Name", style="cyan", no_wrap=True)
    table.add_column("User", style="magenta")
    table.add_column("Activity", style="yellow")
    table.add_column("Coords")
    table.add_column("Frames", justify="right")
    table.add_column("Seconds", justify="right")

    for rec in sorted(recordings, key=lambda r: r.name):
        seconds = len(rec) / rec.meta.fps if rec.meta.fps else 0.0
        table.add_row(
            rec.name,
            rec.meta.user or "-",
            rec.meta.activity or "-",
            rec.meta.coords.value,
            str(len(rec)),
            f"{seconds:.1f}",
        )
    return table


def format_checkpoint_table(manifest: dict[str, Any]) -> Table:
    """Summarise a checkpoint manifest: model config, schedule and parameter count."""
    table = Table(title="Checkpoint", show_header=True, header_style="bold green")
    table.add_column("Field", style="cyan", no_wrap=True)
    table.add_column("Value")

    n_params = 0
    for entry in manifest.get("tensors", []):
        count = 1
        for dim in entry["shape"]:
            count *= int(dim)
        n_params += count

    table.add_row("version", str(manifest.get("version")))
    table.add_row("tensors", str(len(manifest.get("tensors", []))))
    table.add_row("parameters", f"{n_params:,}")
    for key, value in manifest.get("config", {}).items():
        table.add_row(key, str(value))
    for key, value in manifest.get("schedule", {}).items():
        table.add_row(f"schedule.{key}", str(value))
    return table


def format_eval_table(report: EvalReport, title: str = "Reconstruction") -> Table:
    """Format the aggregates of an evaluation report."""
    table = Table(title=title, show_header=True, header_style="bold cyan")
    table.add_column("Metric", style="cyan")
    table.add_column("Mean", justify="right")
    table.add_column("Median", justify="right")

    agg = report.aggregates
    table.add_row("MPJPE (cm)", f"{agg['mpjpe_cm_mean']:.3f}", f"{agg['mpjpe_cm_median']:.3f}")
    table.add_row("Angular error (deg)", f"{agg['angular_deg_mean']:.3f}", f"{agg['angular_deg_median']:.3f}")
    return table


def format_comparison_table(results: dict[str, WilcoxonResult]) -> Table:
    """Format paired signed-rank test results, one row per metric."""
    table = Table(title="Paired Wilcoxon signed-rank test", show_header=True, header_style="bold magenta")
    table.add_column("Metric", style="cyan")
    table.add_column("Pairs", justify="right")
    table.add_column("W+", justify="right")
    table.add_column("p-value", justify="right")
    table.add_column("Method")

    for metric, result in results.items():
        style = "green" if result.p_value < 0.05 else ""
        table.add_row(
            metric,
            str(result.n),
            f"{result.statistic:.1f}",
            f"[{style}]{result.p_value:.4g}[/{style}]" if style else f"{result.p_value:.4g}",
            result.method,
        )
    return table


def format_cluster_table(result: ClusterResult, dbi: Optional[float] = None, chi: Optional[float] = None) -> Table:
    """Format cluster sizes and representatives."""
    caption = None
    if dbi is not None and chi is not None:
        caption = f"DBI {dbi:.4f} | CHI {chi:.4f} | noise points {result.n_noise}"
    table = Table(title=f"{result.n_clusters} clusters", caption=caption, show_header=True, header_style="bold cyan")
    table.add_column("Cluster", style="cyan", justify="right")
    table.add_column("Size", justify="right")
    table.add_column("Representative", justify="right")

    sizes = result.sizes()
    for cid in sorted(sizes):
        table.add_row(str(cid), str(sizes[cid]), str(result.representatives.get(cid, "-")))
    return table


def format_probe_table(report: ProbeReport) -> Table:
    """Format a probe report with per-class accuracy."""
    table = Table(
        title=f"{report.task} probe: {report.accuracy:.1%} (chance {report.chance:.1%})",
        show_header=True,
        header_style="bold cyan",
    )
    table.add_column("Class", style="cyan")
    table.add_column("Accuracy", justify="right")
    for name in report.class_names:
        accuracy = report.per_class.get(name)
        table.add_row(name, "-" if accuracy is None else f"{accuracy:.1%}")
    return table


def print_success(message: str, console: Optional[Console] = None) -> None:
    """Print success message."""
    if console is None:
        console = Console()
    console.print(f"[green]✓[/green] {message}")


def print_error(message: str, console: Optional[Console] = None) -> None:
    """Print error message."""
    if console is None:
        console = Console(stderr=True)
    console.print(f"[red]Error:[/red] {message}")


def print_warning(message: str, console: Optional[Console] = None) -> None:
    """Print warning message."""
    if console is None:
        console = Console()
    console.print(f"[yellow]Warning:[/yellow] {message}")


def print_info(message: str, console: Optional[Console] = None) -> None:
    """Print info message."""
    if console is None:
        console = Console()
    console.print(f"[cyan]ℹ[/cyan] {message}")
