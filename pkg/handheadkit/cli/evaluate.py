"""Eval command for scoring reconstructions of a checkpoint."""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from handheadkit.analysis.metrics import METRICS, evaluate_model
from handheadkit.cli.common import inference_schedule, load_windows, run_guarded
from handheadkit.networks.autoencoder import model_config_of
from handheadkit.storage.checkpoint import load_checkpoint
from handheadkit.storage.reports import save_report, write_cdf_csv, write_run_manifest
from handheadkit.utils.ui import format_eval_table, print_success

logger = logging.getLogger(__name__)

console = Console()


def cdf_path(report: Path, metric: str) -> Path:
    """CSV written next to ``report`` for one metric's CDF."""
    return report.with_name(f"{report.stem}_{metric}_cdf.csv")


def evaluate_checkpoint(
    ckpt: Path,
    data: Path,
    report: Path,
    t_infer: Optional[int] = None,
    ablate_esem: bool = False,
    ablate_esto: bool = False,
    seed: int = 0,
    n: Optional[int] = None,
    dn: Optional[int] = None,
    batch: int = 64,
    stride: Optional[int] = None,
) -> int:
    """
    Reconstruct every window of a corpus and write an evaluation report.

    Writes the report JSON, one CDF CSV per metric next to it, and run.json in the report's
    directory.

    Args:
        ckpt: Checkpoint directory
        data: Recording directory
        report: Output report path
        t_infer: Override the number of inference steps
        ablate_esem: Replace E_sem with Gaussian noise
        ablate_esto: Replace E_sto with Gaussian noise
        seed: Seed of the ablation noise
        n: Window length (the checkpoint's when None)
        dn: Forecast horizon used when windowing (the checkpoint's when None)
        batch: Windows per reconstruction batch
        stride: Window stride (the window length when None, so windows do not overlap)

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        model = load_checkpoint(ckpt)
        sched = inference_schedule(model, t_infer)
        _, inputs = load_windows(data, model, n, dn, stride)

        with Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            console=console,
        ) as progress:
            task = progress.add_task("Reconstructing...", total=inputs.shape[0])
            result = evaluate_model(
                inputs,
                model,
                sched,
                batch_size=batch,
                ablate_semantic=ablate_esem,
                ablate_stochastic=ablate_esto,
                seed=seed,
                on_batch=lambda done: progress.update(task, completed=done),
            )

        result.metadata = {
            "ckpt": str(ckpt),
            "data": str(data),
            "t_infer": t_infer if t_infer is not None else model_config_of(model).t_infer,
            "ablate_esem": ablate_esem,
            "ablate_esto": ablate_esto,
            "seed": seed,
            "stride": stride if stride is not None else model_config_of(model).n,
        }
        report.parent.mkdir(parents=True, exist_ok=True)
        save_report(result, report)
        for metric in METRICS:
            write_cdf_csv(result.cdf[metric], cdf_path(report, metric), metric)
        write_run_manifest(
            report.parent,
            "eval",
            {
                "ckpt": ckpt,
                "data": data,
                "report": report,
                "t_infer": t_infer,
                "ablate_esem": ablate_esem,
                "ablate_esto": ablate_esto,
                "n": n,
                "dn": dn,
                "batch": batch,
                "stride": stride,
            },
            seed,
        )
        console.print(format_eval_table(result))
        print_success(f"Wrote report to {report}", console)
        return 0

    return run_guarded(body, console)
