"""Tests for UI utility functions."""

from io import StringIO

from rich.console import Console
from rich.table import Table

from handheadkit.analysis.stats import WilcoxonResult
from handheadkit.core.models import ClusterResult, EvalReport, ProbeReport, SampleErrors
from handheadkit.utils.ui import (
    format_checkpoint_table,
    format_cluster_table,
    format_comparison_table,
    format_eval_table,
    format_probe_table,
    format_recordings_table,
    print_error,
    print_info,
    print_success,
    print_warning,
)


def _render(table: Table) -> str:
    console = Console(file=StringIO(), width=200)
    console.print(table)
    return console.file.getvalue()


def test_format_recordings_table_sorted_by_name(recording_factory) -> None:
    """Test that recordings are listed by name with frame counts."""
    recordings = [recording_factory(60, name="b"), recording_factory(90, name="a")]

    table = format_recordings_table(recordings)

    assert isinstance(table, Table)
    assert table.title == "Recordings"
    assert len(table.rows) == 2
    output = _render(table)
    assert output.index(" a ") < output.index(" b ")
    assert "3.0" in output


def test_format_checkpoint_table_counts_parameters() -> None:
    """Test that the parameter count sums every tensor."""
    manifest = {
        "version": 1,
        "tensors": [
            {"name": "w", "shape": [3, 4], "dtype": "f32", "offset": 0},
            {"name": "b", "shape": [4], "dtype": "f32", "offset": 48},
        ],
        "config": {"variant": "ours", "n": 40},
        "schedule": {"t_infer": 100},
    }

    output = _render(format_checkpoint_table(manifest))

    assert "16" in output
    assert "schedule.t_infer" in output
    assert "variant" in output


def test_format_eval_table() -> None:
    """Test evaluation summary rows."""
    report = EvalReport(
        per_sample=[SampleErrors(1.0, 2.0)],
        aggregates={"n_samples": 1, "mpjpe_cm_mean": 1.0, "mpjpe_cm_median": 1.0,
                    "angular_deg_mean": 2.0, "angular_deg_median": 2.0},
        cdf={},
    )

    table = format_eval_table(report)

    assert len(table.rows) == 2
    assert "MPJPE (cm)" in _render(table)


def test_format_comparison_table() -> None:
    """Test one row per compared metric."""
    results = {
        "mpjpe_cm": WilcoxonResult(statistic=21.0, p_value=0.03125, n=6, method="exact"),
        "angular_deg": WilcoxonResult(statistic=5.0, p_value=1.0, n=4, method="exact"),
    }

    table = format_comparison_table(results)

    assert len(table.rows) == 2
    assert "0.03125" in _render(table)


def test_format_cluster_table() -> None:
    """Test cluster sizes and the quality caption."""
    result = ClusterResult(labels=[0, 0, 1, -1], n_clusters=2, representatives={0: 0, 1: 2})

    table = format_cluster_table(result, dbi=0.1, chi=200.0)

    assert table.title == "2 clusters"
    assert len(table.rows) == 2
    assert "noise points 1" in table.caption


def test_format_probe_table() -> None:
    """Test per-class rows and the accuracy title."""
    report = ProbeReport(
        task="activity",
        accuracy=0.75,
        chance=1 / 3,
        per_class={"idle": 1.0, "reach": 0.5},
        confusion=[[2, 0, 0], [1, 1, 0], [0, 0, 0]],
        class_names=["idle", "reach", "bimanual"],
    )

    table = format_probe_table(report)

    assert len(table.rows) == 3
    assert "75.0%" in table.title


def test_print_success() -> None:
    """Test printing success message."""
    console = Console(file=StringIO())
    print_success("Saved checkpoint", console=console)
    assert "Saved checkpoint" in console.file.getvalue()


def test_print_error() -> None:
    """Test printing error message."""
    console = Console(file=StringIO())
    print_error("Corrupt checkpoint", console=console)
    output = console.file.getvalue()
    assert "Corrupt checkpoint" in output
    assert "Error" in output


def test_print_warning() -> None:
    """Test printing warning message."""
    console = Console(file=StringIO())
    print_warning("Missing labels", console=console)
    assert "Warning" in console.file.getvalue()


def test_print_info() -> None:
    """Test printing info message."""
    console = Console(file=StringIO())
    print_info("Training on 10 windows", console=console)
    assert "Training on 10 windows" in console.file.getvalue()


def test_print_default_console() -> None:
    """Test printing with default consoles."""
    print_success("ok")
    print_error("bad")
