"""Writers for evaluation reports, plot-ready CSVs, training logs and run manifests."""

import csv
import json
import logging
import platform
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np
import torch

from handheadkit import __version__
from handheadkit.core.models import EvalReport, LossRecord

logger = logging.getLogger(__name__)

RUN_MANIFEST = "run.json"
TRAINING_LOG_COLUMNS = ("epoch", "step", "total", "l_noise", "l_forecast")


def write_json(data: Any, path: Path) -> Path:
    """Write ``data`` as indented JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, ensure_ascii=False)
        f.write("\n")
    return path


def read_json(path: Path) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_report(report: EvalReport, path: Path) -> Path:
    """Write an evaluation report as JSON."""
    return write_json(report.to_dict(), path)


def load_report(path: Path) -> EvalReport:
    """Read an evaluation report written by :func:`save_report`."""
    return EvalReport.from_dict(read_json(path))


def write_rows(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV file with a header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_cdf_csv(points: Sequence[tuple[float, float]], path: Path, metric: str = "threshold") -> Path:
    """Write CDF points as ``<metric>,fraction`` rows."""
    return write_rows(path, (metric, "fraction"), ([repr(float(x)), repr(float(y))] for x, y in points))


def write_training_log(log: Sequence[LossRecord], path: Path) -> Path:
    """Write the per-step training log CSV."""
    rows = ([r.epoch, r.step, repr(r.total), repr(r.l_noise), repr(r.l_forecast)] for r in log)
    return write_rows(path, TRAINING_LOG_COLUMNS, rows)


def read_training_log(path: Path) -> list[LossRecord]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return [
            LossRecord(
                epoch=int(row["epoch"]),
                step=int(row["step"]),
                total=float(row["total"]),
                l_noise=float(row["l_noise"]),
                l_forecast=float(row["l_forecast"]),
            )
            for row in csv.DictReader(f)
        ]


def package_versions() -> dict[str, str]:
    """Versions recorded in run manifests."""
    return {
        "handheadkit": __version__,
        "python": platform.python_version(),
        "torch": torch.__version__,
        "numpy": np.__version__,
    }


def write_run_manifest(
    directory: Path, verb: str, flags: dict[str, Any], seed: Optional[int], timestamp: Optional[datetime] = None
) -> Path:
    """
    Write ``run.json`` describing one CLI invocation.

    Args:
        directory: Directory the outputs were written to
        verb: CLI verb
        flags: Effective flag values (paths are stringified)
        seed: Seed the run used
        timestamp: Run time (now, UTC, when None)
    """
    stamp = (timestamp or datetime.now(timezone.utc)).isoformat()
    manifest = {
        "verb": verb,
        "flags": {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(flags.items())},
        "seed": seed,
        "versions": package_versions(),
        "timestamp": stamp,
    }
    path = write_json(manifest, Path(directory) / RUN_MANIFEST)
    logger.debug(f"Wrote run manifest {path}")
    return path
