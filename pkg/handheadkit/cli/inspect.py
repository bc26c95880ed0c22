"""Inspect command for summarising checkpoints, reports and corpora."""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console

from handheadkit.analysis.metrics import compare_reports
from handheadkit.cli.common import run_guarded
from handheadkit.core.errors import BadConfig
from handheadkit.storage.checkpoint import read_manifest
from handheadkit.storage.recordings import load_corpus
from handheadkit.storage.reports import load_report, write_json
from handheadkit.utils.ui import (
    format_checkpoint_table,
    format_comparison_table,
    format_eval_table,
    format_recordings_table,
    print_info,
)

logger = logging.getLogger(__name__)

console = Console()


def inspect_artifacts(
    ckpt: Optional[Path] = None,
    report: Optional[Path] = None,
    against: Optional[Path] = None,
    data: Optional[Path] = None,
    out: Optional[Path] = None,
    min_pairs: int = 5,
) -> int:
    """
    Print summaries of a checkpoint, an evaluation report or a recording directory.

    With ``against``, the two reports are compared with paired Wilcoxon signed-rank tests; the
    results are written to ``out`` as JSON when it is given.

    Args:
        ckpt: Checkpoint directory
        report: Evaluation report JSON
        against: Second report to compare ``report`` with
        data: Recording directory
        out: Optional JSON file for the comparison
        min_pairs: Minimum non-zero differences for the signed-rank test

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        if ckpt is None and report is None and data is None:
            raise BadConfig("Nothing to inspect: pass --ckpt, --report or --data")
        if against is not None and report is None:
            raise BadConfig("--against needs --report")

        if ckpt is not None:
            console.print(format_checkpoint_table(read_manifest(ckpt)))
        if data is not None:
            console.print(format_recordings_table(load_corpus(data)))
        if report is not None:
            first = load_report(report)
            console.print(format_eval_table(first, title=str(report)))
            if against is not None:
                second = load_report(against)
                console.print(format_eval_table(second, title=str(against)))
                results = compare_reports(first, second, min_pairs)
                console.print(format_comparison_table(results))
                if out is not None:
                    write_json({metric: r.to_dict() for metric, r in results.items()}, out)
                    print_info(f"Wrote comparison to {out}", console)
        return 0

    return run_guarded(body, console)
