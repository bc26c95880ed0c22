"""Reconstruction metrics, CDF export and whole-dataset evaluation."""

import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np
import torch

from handheadkit.analysis.stats import WilcoxonResult, wilcoxon_paired
from handheadkit.core.diffusion import DiffusionSchedule
from handheadkit.core.errors import BadConfig, DegenerateDirection, EmptyInput, LengthMismatch, ShapeMismatch
from handheadkit.core.models import HEAD_CHANNELS, SIGNAL_DIM, EvalReport, HandHeadSequence, SampleErrors
from handheadkit.networks.autoencoder import Model
from handheadkit.training.trainer import reconstruct

logger = logging.getLogger(__name__)

SignalLike = Union[HandHeadSequence, np.ndarray, torch.Tensor]
METRICS = ("mpjpe_cm", "angular_deg")
DEFAULT_CDF_POINTS = 100


def _as_array(x: SignalLike, rows: int) -> np.ndarray:
    if isinstance(x, HandHeadSequence):
        array = x.to_array()
    elif isinstance(x, torch.Tensor):
        array = x.detach().cpu().numpy()
    else:
        array = np.asarray(x)
    array = array.astype(np.float64)
    if array.ndim != 2 or array.shape[0] != rows:
        raise ShapeMismatch(f"Expected a ({rows}, N) array, got shape {array.shape}")
    return array


def _check_lengths(pred: np.ndarray, gt: np.ndarray) -> None:
    if pred.shape[1] != gt.shape[1]:
        raise LengthMismatch(f"Prediction has {pred.shape[1]} frames, ground truth {gt.shape[1]}")
    if pred.shape[1] == 0:
        raise EmptyInput("Cannot score an empty sequence")


def mpjpe(pred: SignalLike, gt: SignalLike) -> float:
    """
    Mean per-joint position error of the hands in centimetres.

    Each frame contributes the mean of the left- and right-hand Euclidean errors.

    Raises:
        LengthMismatch: If the sequences differ in length
    """
    p = _as_array(pred, SIGNAL_DIM)
    g = _as_array(gt, SIGNAL_DIM)
    _check_lengths(p, g)
    left = np.linalg.norm(p[0:3] - g[0:3], axis=0)
    right = np.linalg.norm(p[3:6] - g[3:6], axis=0)
    return float(np.mean((left + right) / 2.0) * 100.0)


def _unit(directions: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(directions, axis=0)
    if np.any(norms <= 1e-8):
        raise DegenerateDirection("Cannot measure the angle of a zero direction")
    return directions / norms


def angular_error(pred_he: SignalLike, gt_he: SignalLike) -> float:
    """
    Mean angle between predicted and true head directions, in degrees.

    Accepts (3, N) direction arrays or full (9, N) signals.

    Raises:
        LengthMismatch: If the sequences differ in length
        DegenerateDirection: If any direction has (near) zero length
    """
    p = _head_rows(pred_he)
    g = _head_rows(gt_he)
    _check_lengths(p, g)
    cosine = np.clip(np.sum(_unit(p) * _unit(g), axis=0), -1.0, 1.0)
    return float(np.degrees(np.mean(np.arccos(cosine))))


def _head_rows(x: SignalLike) -> np.ndarray:
    if isinstance(x, HandHeadSequence):
        return x.to_array()[HEAD_CHANNELS]
    rows = x.shape[0] if hasattr(x, "shape") else len(x)  # type: ignore[arg-type]
    if rows == SIGNAL_DIM:
        return _as_array(x, SIGNAL_DIM)[HEAD_CHANNELS]
    return _as_array(x, 3)


def cdf(errors: Sequence[float], n_points: int = DEFAULT_CDF_POINTS) -> list[tuple[float, float]]:
    """
    Empirical CDF on a regular grid from 0 to max(errors).

    An error counts toward a threshold when it is less than or equal to it.

    Raises:
        EmptyInput: If ``errors`` is empty
    """
    values = np.sort(np.asarray(errors, dtype=np.float64))
    if values.size == 0:
        raise EmptyInput("CDF of an empty error list")
    if n_points < 1:
        raise BadConfig(f"n_points must be positive, got {n_points}")
    thresholds = np.linspace(0.0, values[-1], n_points) if n_points > 1 else np.array([values[-1]])
    counts = np.searchsorted(values, thresholds, side="right")
    return [(float(t), float(c) / values.size) for t, c in zip(thresholds, counts)]


def summarize(errors: Sequence[SampleErrors]) -> dict[str, float]:
    """Means and medians of both metrics."""
    aggregates: dict[str, float] = {"n_samples": float(len(errors))}
    for metric in METRICS:
        values = np.array([getattr(e, metric) for e in errors], dtype=np.float64)
        aggregates[f"{metric}_mean"] = float(values.mean())
        aggregates[f"{metric}_median"] = float(np.median(values))
    return aggregates


def evaluate_model(
    inputs: torch.Tensor,
    model: Model,
    sched: Optional[DiffusionSchedule] = None,
    batch_size: int = 64,
    ablate_semantic: bool = False,
    ablate_stochastic: bool = False,
    seed: int = 0,
    n_points: int = DEFAULT_CDF_POINTS,
    on_batch: Optional[Callable[[int], None]] = None,
) -> EvalReport:
    """
    Reconstruct every window and score it.

    Args:
        inputs: (S, 9, N) evaluation windows in metres
        model: Trained model
        sched: Inference schedule (the model's own when None)
        batch_size: Windows per reconstruction batch
        ablate_semantic: Replace E_sem with Gaussian noise
        ablate_stochastic: Replace E_sto with Gaussian noise
        seed: Seed of the ablation noise
        n_points: CDF resolution
        on_batch: Called with the number of windows finished after each batch

    Raises:
        EmptyInput: If there are no windows
    """
    if inputs.shape[0] == 0:
        raise EmptyInput("No evaluation windows")
    generator = torch.Generator().manual_seed(seed)
    per_sample: list[SampleErrors] = []
    for start in range(0, inputs.shape[0], batch_size):
        batch = inputs[start : start + batch_size]
        recon = reconstruct(
            batch,
            model,
            sched,
            ablate_semantic=ablate_semantic,
            ablate_stochastic=ablate_stochastic,
            generator=generator,
        )
        for pred, gt in zip(recon, batch):
            per_sample.append(SampleErrors(mpjpe_cm=mpjpe(pred, gt), angular_deg=angular_error(pred, gt)))
        if on_batch is not None:
            on_batch(len(per_sample))

    aggregates = summarize(per_sample)
    curves = {metric: cdf([getattr(e, metric) for e in per_sample], n_points) for metric in METRICS}
    logger.info(
        f"Evaluated {len(per_sample)} windows: MPJPE {aggregates['mpjpe_cm_mean']:.3f} cm, "
        f"angular {aggregates['angular_deg_mean']:.3f} deg"
    )
    return EvalReport(per_sample=per_sample, aggregates=aggregates, cdf=curves)


def compare_reports(a: EvalReport, b: EvalReport, min_pairs: int = 5) -> dict[str, WilcoxonResult]:
    """
    Paired signed-rank tests between two reports on the same windows, one per metric.

    Raises:
        LengthMismatch: If the reports cover different numbers of windows
        TooFewPairs: If a metric has too few non-zero differences
    """
    if len(a.per_sample) != len(b.per_sample):
        raise LengthMismatch(f"Reports cover {len(a.per_sample)} and {len(b.per_sample)} windows")
    return {
        metric: wilcoxon_paired(
            [getattr(e, metric) for e in a.per_sample], [getattr(e, metric) for e in b.per_sample], min_pairs
        )
        for metric in METRICS
    }
