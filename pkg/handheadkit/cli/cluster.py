"""Cluster command for grouping semantic embeddings of a corpus."""

import logging
from pathlib import Path
from typing import Optional

from rich.console import Console

from handheadkit.analysis.clustering import DEFAULT_MIN_CLUSTER_SIZE, cluster, cluster_summary
from handheadkit.cli.common import load_windows, run_guarded
from handheadkit.storage.checkpoint import load_checkpoint
from handheadkit.storage.reports import write_json, write_rows, write_run_manifest
from handheadkit.training.trainer import semantic_embeddings
from handheadkit.utils.ui import format_cluster_table, print_success

logger = logging.getLogger(__name__)

console = Console()

CLUSTERS_FILE = "clusters.json"
ASSIGNMENTS_FILE = "assignments.csv"


def cluster_corpus(
    ckpt: Path,
    data: Path,
    out: Path,
    min_cluster_size: int = DEFAULT_MIN_CLUSTER_SIZE,
    seed: int = 0,
    n: Optional[int] = None,
    dn: Optional[int] = None,
) -> int:
    """
    Cluster the semantic embeddings of every window of a corpus.

    Writes clusters.json (sizes, representatives, DBI, CHI, labels) and assignments.csv
    (one row per window with its source recording, start frame and labels).

    Args:
        ckpt: Checkpoint directory
        data: Recording directory
        out: Output directory
        min_cluster_size: HDBSCAN minimum cluster size
        seed: Recorded in run.json; clustering itself is deterministic
        n: Window length (the checkpoint's when None)
        dn: Forecast horizon used when windowing (the checkpoint's when None)

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        model = load_checkpoint(ckpt)
        samples, inputs = load_windows(data, model, n, dn)
        embeddings = semantic_embeddings(inputs, model).double().numpy()

        result = cluster(embeddings, min_cluster_size)
        summary = cluster_summary(result, embeddings)
        summary["windows"] = [
            {
                "source": s.source,
                "start": s.start,
                "activity": s.labels.get("activity", ""),
                "user": s.labels.get("user", ""),
            }
            for s in samples
        ]

        out.mkdir(parents=True, exist_ok=True)
        write_json(summary, out / CLUSTERS_FILE)
        write_rows(
            out / ASSIGNMENTS_FILE,
            ("index", "cluster", "source", "start", "activity", "user"),
            (
                (i, label, s.source, s.start, s.labels.get("activity", ""), s.labels.get("user", ""))
                for i, (label, s) in enumerate(zip(result.labels, samples))
            ),
        )
        write_run_manifest(
            out,
            "cluster",
            {"ckpt": ckpt, "data": data, "out": out, "min_cluster_size": min_cluster_size, "n": n, "dn": dn},
            seed,
        )
        console.print(format_cluster_table(result, summary["dbi"], summary["chi"]))
        print_success(f"Found {result.n_clusters} cluster(s); wrote {out / CLUSTERS_FILE}", console)
        return 0

    return run_guarded(body, console)
