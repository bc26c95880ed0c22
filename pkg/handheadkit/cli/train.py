"""Train command for fitting a model on a recording corpus."""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from handheadkit.cli.common import run_guarded
from handheadkit.core.config import ModelConfig, TrainConfig
from handheadkit.storage.checkpoint import save_checkpoint
from handheadkit.storage.recordings import load_corpus
from handheadkit.storage.reports import write_run_manifest, write_training_log
from handheadkit.training.data import window_corpus
from handheadkit.training.trainer import train
from handheadkit.utils.config import build_config, load_config_file
from handheadkit.utils.ui import print_info, print_success
from handheadkit.utils.validation import check_window, parse_variant

logger = logging.getLogger(__name__)

console = Console()

TRAINING_LOG_FILE = "training_log.csv"


def train_model(
    data: Path,
    out: Path,
    epochs: Optional[int] = None,
    lr: Optional[float] = None,
    batch: Optional[int] = None,
    seed: Optional[int] = None,
    n: Optional[int] = None,
    dn: Optional[int] = None,
    model: Optional[str] = None,
    workers: Optional[int] = None,
    t_infer: Optional[int] = None,
    forecast_weight: Optional[float] = None,
    config_path: Optional[Path] = None,
) -> int:
    """
    Train a model and write its checkpoint directory.

    Options left as None fall back to the YAML config (when given) and then to the defaults.

    Args:
        data: Recording directory
        out: Checkpoint directory to create
        epochs: Training epochs
        lr: Adam learning rate
        batch: Batch size
        seed: Run seed
        n: Window length
        dn: Forecast horizon
        model: Model variant name
        workers: DataLoader workers
        t_infer: Inference steps stored with the checkpoint
        forecast_weight: Weight of the forecasting loss
        config_path: Optional YAML run configuration

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        sections = load_config_file(config_path) if config_path else {}
        model_config = build_config(
            ModelConfig,
            sections.get("model"),
            variant=parse_variant(model) if model else None,
            n=n,
            dn=dn,
            t_infer=t_infer,
            forecast_weight=forecast_weight,
        )
        train_config = build_config(
            TrainConfig,
            sections.get("train"),
            epochs=epochs,
            learning_rate=lr,
            batch_size=batch,
            seed=seed,
            workers=workers,
        )
        check_window(model_config.n, model_config.dn, train_config.stride)

        samples = window_corpus(load_corpus(data), model_config.n, model_config.dn, train_config.stride)
        print_info(f"Training {model_config.variant.value} on {len(samples)} windows", console)

        with Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TextColumn("loss {task.fields[loss]}"),
            console=console,
        ) as progress:
            task = progress.add_task("Training...", total=train_config.epochs, loss="-")

            def on_epoch(epoch: int, mean_total: float) -> None:
                progress.update(task, completed=epoch, loss=f"{mean_total:.5f}")

            result = train(samples, model_config, train_config, on_epoch=on_epoch)

        save_checkpoint(result.model, out)
        write_training_log(result.log, out / TRAINING_LOG_FILE)
        write_run_manifest(
            out,
            "train",
            {
                "data": data,
                "out": out,
                "config": config_path,
                "model": model_config.to_dict(),
                "train": train_config.to_dict(),
            },
            train_config.seed,
        )
        print_success(f"Saved checkpoint to {out}", console)
        return 0

    return run_guarded(body, console)
