"""Main CLI application entry point."""

from pathlib import Path
from typing import Optional, Sequence

import typer

from handheadkit import __version__
from handheadkit.analysis.clustering import DEFAULT_MIN_CLUSTER_SIZE
from handheadkit.cli.cluster import cluster_corpus
from handheadkit.cli.evaluate import evaluate_checkpoint
from handheadkit.cli.generate import generate_motion
from handheadkit.cli.inspect import inspect_artifacts
from handheadkit.cli.probe import PROBE_TASKS, probe_checkpoint
from handheadkit.cli.synth import synth_corpus
from handheadkit.cli.train import train_model
from handheadkit.utils.logging import setup_logging

app = typer.Typer(
    name="hhkit",
    help="Learn, evaluate and analyse hand-head movement representations",
    add_completion=False,
)


@app.command()
def synth(
    families: str = typer.Option("reach,idle,bimanual", "--families", help="Comma-separated motion families"),
    users: int = typer.Option(3, "--users", help="Number of synthetic users"),
    minutes: float = typer.Option(2.0, "--minutes", help="Length of every recording in minutes"),
    seed: int = typer.Option(0, "--seed", help="Run seed"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory for JSONL recordings"),
) -> None:
    """
    Generate a synthetic corpus: one recording per family and user.

    Examples:

      # 3 families x 3 users = 9 recordings
      hhkit synth --families reach,idle,bimanual --users 3 --minutes 2 --seed 1 --out data/
    """
    exit_code = synth_corpus(families=families, users=users, minutes=minutes, seed=seed, out=out)
    raise typer.Exit(code=exit_code)


@app.command()
def train(
    data: Path = typer.Option(..., "--data", "-d", help="Recording directory"),
    out: Path = typer.Option(..., "--out", "-o", help="Checkpoint directory to write"),
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Training epochs"),
    lr: Optional[float] = typer.Option(None, "--lr", help="Adam learning rate"),
    batch: Optional[int] = typer.Option(None, "--batch", help="Batch size"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Run seed"),
    n: Optional[int] = typer.Option(None, "--n", help="Window length (multiple of 4)"),
    dn: Optional[int] = typer.Option(None, "--dn", help="Forecast horizon"),
    model: Optional[str] = typer.Option(None, "--model", "-m", help="Model variant (ours, vae-gru, ...)"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Data-loading worker processes"),
    t_infer: Optional[int] = typer.Option(None, "--t-infer", help="Inference steps stored with the checkpoint"),
    forecast_weight: Optional[float] = typer.Option(
        None, "--forecast-weight", help="Weight of the forecasting loss (0 disables forecasting)"
    ),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="YAML run configuration"),
) -> None:
    """
    Train a model on a recording directory and save a checkpoint.

    Unset options come from --config, then from the built-in defaults.

    Examples:

      # Train the diffusion autoencoder
      hhkit train --data data/ --epochs 10 --out ckpt/

      # Desk-scale setup from the example config
      hhkit train --data data/ --out ckpt/ --config handheadkit.yaml

      # A VAE baseline
      hhkit train --data data/ --out ckpt-vae/ --model vae-lstm
    """
    exit_code = train_model(
        data=data,
        out=out,
        epochs=epochs,
        lr=lr,
        batch=batch,
        seed=seed,
        n=n,
        dn=dn,
        model=model,
        workers=workers,
        t_infer=t_infer,
        forecast_weight=forecast_weight,
        config_path=config,
    )
    raise typer.Exit(code=exit_code)


@app.command(name="eval")
def evaluate(
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint directory"),
    data: Path = typer.Option(..., "--data", "-d", help="Recording directory"),
    report: Path = typer.Option(..., "--report", "-r", help="Report JSON to write"),
    t_infer: Optional[int] = typer.Option(None, "--t-infer", help="Override the number of inference steps"),
    ablate_esem: bool = typer.Option(False, "--ablate-esem", help="Replace E_sem with Gaussian noise"),
    ablate_esto: bool = typer.Option(False, "--ablate-esto", help="Replace E_sto with Gaussian noise"),
    seed: int = typer.Option(0, "--seed", help="Seed of the ablation noise"),
    n: Optional[int] = typer.Option(None, "--n", help="Window length (the checkpoint's by default)"),
    dn: Optional[int] = typer.Option(None, "--dn", help="Forecast horizon used when windowing"),
    batch: int = typer.Option(64, "--batch", help="Windows per reconstruction batch"),
    stride: Optional[int] = typer.Option(
        None, "--stride", help="Window stride (default: the window length, no overlap)"
    ),
) -> None:
    """
    Reconstruct every window of a corpus and report MPJPE and angular error.

    Examples:

      hhkit eval --ckpt ckpt/ --data data/ --report out.json

      # Semantic-embedding ablation
      hhkit eval --ckpt ckpt/ --data data/ --report ablate.json --ablate-esem
    """
    exit_code = evaluate_checkpoint(
        ckpt=ckpt,
        data=data,
        report=report,
        t_infer=t_infer,
        ablate_esem=ablate_esem,
        ablate_esto=ablate_esto,
        seed=seed,
        n=n,
        dn=dn,
        batch=batch,
        stride=stride,
    )
    raise typer.Exit(code=exit_code)


@app.command()
def cluster(
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint directory"),
    data: Path = typer.Option(..., "--data", "-d", help="Recording directory"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory"),
    min_cluster_size: int = typer.Option(DEFAULT_MIN_CLUSTER_SIZE, "--min-cluster-size", help="HDBSCAN minimum size"),
    seed: int = typer.Option(0, "--seed", help="Run seed"),
    n: Optional[int] = typer.Option(None, "--n", help="Window length (the checkpoint's by default)"),
    dn: Optional[int] = typer.Option(None, "--dn", help="Forecast horizon used when windowing"),
) -> None:
    """
    Cluster semantic embeddings and report DBI, CHI and representatives.

    Examples:

      hhkit cluster --ckpt ckpt/ --data data/ --out clusters/ --min-cluster-size 15
    """
    exit_code = cluster_corpus(
        ckpt=ckpt, data=data, out=out, min_cluster_size=min_cluster_size, seed=seed, n=n, dn=dn
    )
    raise typer.Exit(code=exit_code)


@app.command()
def generate(
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint directory"),
    data: Path = typer.Option(..., "--data", "-d", help="Recording directory with conditioning windows"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory"),
    beta: float = typer.Option(0.0, "--beta", help="Weight of the noise added to E_sto"),
    seed: int = typer.Option(0, "--seed", help="Seed of the added noise"),
    count: int = typer.Option(1, "--count", help="Number of conditioning windows"),
    from_noise: bool = typer.Option(False, "--from-noise", help="Decode from pure Gaussian noise"),
    t_infer: Optional[int] = typer.Option(None, "--t-infer", help="Override the number of inference steps"),
    n: Optional[int] = typer.Option(None, "--n", help="Window length (the checkpoint's by default)"),
    dn: Optional[int] = typer.Option(None, "--dn", help="Forecast horizon used when windowing"),
) -> None:
    """
    Generate variants of recorded windows that keep their semantics.

    Examples:

      # Small variations of the first 4 windows
      hhkit generate --ckpt ckpt/ --data data/ --out gen/ --beta 0.1 --count 4
    """
    exit_code = generate_motion(
        ckpt=ckpt,
        data=data,
        out=out,
        beta=beta,
        seed=seed,
        count=count,
        from_noise=from_noise,
        t_infer=t_infer,
        n=n,
        dn=dn,
    )
    raise typer.Exit(code=exit_code)


@app.command()
def probe(
    ckpt: Path = typer.Option(..., "--ckpt", help="Checkpoint directory"),
    data: Path = typer.Option(..., "--data", "-d", help="Labelled recording directory"),
    out: Path = typer.Option(..., "--out", "-o", help="Output directory"),
    tasks: str = typer.Option(",".join(PROBE_TASKS), "--tasks", help="Comma-separated label keys"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Probe seed"),
    epochs: Optional[int] = typer.Option(None, "--epochs", help="Probe epochs"),
    lr: Optional[float] = typer.Option(None, "--lr", help="Probe learning rate"),
    batch: Optional[int] = typer.Option(None, "--batch", help="Probe batch size"),
    n: Optional[int] = typer.Option(None, "--n", help="Window length (the checkpoint's by default)"),
    dn: Optional[int] = typer.Option(None, "--dn", help="Forecast horizon used when windowing"),
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="YAML run configuration"),
) -> None:
    """
    Fit linear probes on frozen semantic embeddings (user and activity).

    Examples:

      hhkit probe --ckpt ckpt/ --data data/ --out probes/ --epochs 200 --lr 1e-2
    """
    exit_code = probe_checkpoint(
        ckpt=ckpt,
        data=data,
        out=out,
        tasks=tasks,
        seed=seed,
        epochs=epochs,
        lr=lr,
        batch=batch,
        n=n,
        dn=dn,
        config_path=config,
    )
    raise typer.Exit(code=exit_code)


@app.command()
def inspect(
    ckpt: Optional[Path] = typer.Option(None, "--ckpt", help="Checkpoint directory"),
    report: Optional[Path] = typer.Option(None, "--report", "-r", help="Evaluation report"),
    against: Optional[Path] = typer.Option(None, "--against", help="Second report for a paired comparison"),
    data: Optional[Path] = typer.Option(None, "--data", "-d", help="Recording directory"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="JSON file for the comparison"),
) -> None:
    """
    Summarise a checkpoint, a report or a corpus; compare two reports.

    Examples:

      hhkit inspect --ckpt ckpt/

      # Paired Wilcoxon signed-rank test between two methods
      hhkit inspect --report ours.json --against vae.json
    """
    exit_code = inspect_artifacts(ckpt=ckpt, report=report, against=against, data=data, out=out)
    raise typer.Exit(code=exit_code)


@app.command()
def version() -> None:
    """Show handheadkit version."""
    from importlib.metadata import version as get_version

    try:
        version = get_version("handheadkit")
    except Exception:
        version = __version__

    typer.echo(f"handheadkit version {version}")


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    log_level: str = typer.Option("WARNING", "--log-level", help="Logging level (DEBUG, INFO, WARNING, ERROR)"),
    log_file: Optional[Path] = typer.Option(None, "--log-file", help="Also write logs to this file"),
) -> None:
    """
    handheadkit - representation learning for hand-head movement.

    Synthesise corpora, train the diffusion autoencoder or its VAE baselines, evaluate
    reconstructions and analyse the learned semantic embeddings.
    """
    setup_logging(log_level, log_file)
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit(0)


def dispatch(argv: Sequence[str]) -> int:
    """
    Run one CLI invocation and return its exit code instead of exiting.

    Usage errors (unknown verb, bad flag) return 2 after printing the synopsis to stderr.
    """
    command = typer.main.get_command(app)
    try:
        command.main(args=list(argv), prog_name="hhkit", standalone_mode=True)
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0
