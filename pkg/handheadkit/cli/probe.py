"""Probe command for linear classification on frozen semantic embeddings."""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console

from handheadkit.analysis.probes import fit_probe, probe_report, split_halves
from handheadkit.cli.common import load_windows, run_guarded
from handheadkit.core.config import ProbeConfig
from handheadkit.core.errors import BadConfig
from handheadkit.storage.checkpoint import load_checkpoint
from handheadkit.storage.reports import write_json, write_run_manifest
from handheadkit.training.data import label_values, samples_to_tensors
from handheadkit.training.trainer import semantic_embeddings
from handheadkit.utils.config import build_config, load_config_file
from handheadkit.utils.ui import format_probe_table, print_success, print_warning

logger = logging.getLogger(__name__)

console = Console()

PROBE_TASKS = ("activity", "user")


def probe_file(out: Path, task: str) -> Path:
    """Report path of one probe task."""
    return out / f"probe_{task}.json"


def probe_checkpoint(
    ckpt: Path,
    data: Path,
    out: Path,
    tasks: str = ",".join(PROBE_TASKS),
    seed: Optional[int] = None,
    epochs: Optional[int] = None,
    lr: Optional[float] = None,
    batch: Optional[int] = None,
    n: Optional[int] = None,
    dn: Optional[int] = None,
    config_path: Optional[Path] = None,
) -> int:
    """
    Fit linear probes on the first half of every recording and score them on the second half.

    Args:
        ckpt: Checkpoint directory whose semantic encoder stays frozen
        data: Labelled recording directory
        out: Output directory for probe_<task>.json
        tasks: Comma-separated label keys to probe
        seed: Probe seed
        epochs: Probe epochs
        lr: Probe learning rate
        batch: Probe batch size
        n: Window length (the checkpoint's when None)
        dn: Forecast horizon used when windowing (the checkpoint's when None)
        config_path: Optional YAML run configuration (its probe section)

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        task_list = [t.strip() for t in tasks.split(",") if t.strip()]
        unknown = [t for t in task_list if t not in PROBE_TASKS]
        if not task_list or unknown:
            raise BadConfig(f"Probe tasks must be among {', '.join(PROBE_TASKS)}, got '{tasks}'")
        sections = load_config_file(config_path) if config_path else {}
        config = build_config(
            ProbeConfig, sections.get("probe"), seed=seed, epochs=epochs, learning_rate=lr, batch_size=batch
        )

        model = load_checkpoint(ckpt)
        samples, _ = load_windows(data, model, n, dn)
        fit_samples, test_samples = split_halves(samples)
        if not test_samples:
            raise BadConfig("Every recording yields a single window; nothing left to test on")
        fit_inputs, _ = samples_to_tensors(fit_samples)
        test_inputs, _ = samples_to_tensors(test_samples)
        fit_embeddings = semantic_embeddings(fit_inputs, model)
        test_embeddings = semantic_embeddings(test_inputs, model)

        out.mkdir(parents=True, exist_ok=True)
        for task in task_list:
            fit_labels = label_values(fit_samples, task)
            test_labels = label_values(test_samples, task)
            if "" in fit_labels or "" in test_labels:
                print_warning(f"Some recordings have no '{task}' label; skipping the {task} probe", console)
                continue
            probe = fit_probe(fit_embeddings, fit_labels, config)
            report = probe_report(task, probe, test_embeddings, test_labels)
            write_json(report.to_dict(), probe_file(out, task))
            console.print(format_probe_table(report))

        write_run_manifest(
            out,
            "probe",
            {"ckpt": ckpt, "data": data, "out": out, "tasks": tasks, "config": config_path, "probe": config.to_dict()},
            config.seed,
        )
        print_success(f"Wrote probe reports to {out}", console)
        return 0

    return run_guarded(body, console)
