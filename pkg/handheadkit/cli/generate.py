"""Generate command for producing motion variants from a checkpoint."""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
from rich.console import Console

from handheadkit.analysis.generation import generate_from_noise, generate_variants
from handheadkit.cli.common import inference_schedule, load_windows, run_guarded
from handheadkit.core.errors import BadConfig
from handheadkit.core.models import Coords, HandHeadSequence, Recording, RecordingMeta, Sample
from handheadkit.storage.checkpoint import load_checkpoint
from handheadkit.storage.recordings import RECORDING_SUFFIX, save_recording
from handheadkit.storage.reports import write_run_manifest
from handheadkit.training.trainer import semantic_embeddings
from handheadkit.utils.ui import print_success

logger = logging.getLogger(__name__)

console = Console()


def _as_recording(signal: np.ndarray, source: Sample, name: str) -> Recording:
    sequence = HandHeadSequence.from_array(signal, fps=source.input.fps, start=source.start)
    meta = RecordingMeta(
        fps=source.input.fps,
        user=source.labels.get("user", ""),
        activity=source.labels.get("activity", ""),
        coords=Coords.RELATIVE,
    )
    return Recording(meta=meta, frames=list(sequence.frames), name=name)


def generate_motion(
    ckpt: Path,
    data: Path,
    out: Path,
    beta: float = 0.0,
    seed: int = 0,
    count: int = 1,
    from_noise: bool = False,
    t_infer: Optional[int] = None,
    n: Optional[int] = None,
    dn: Optional[int] = None,
) -> int:
    """
    Generate motion windows conditioned on the first ``count`` windows of a corpus.

    Without --from-noise each source window is re-decoded from E_sto + beta * z; with it the
    stochastic code is pure Gaussian noise. Every source window yields the original and the
    generated window as relative-coordinate recordings.

    Args:
        ckpt: Checkpoint directory (diffusion autoencoder)
        data: Recording directory supplying the conditioning windows
        out: Output directory
        beta: Randomness weight
        seed: Seed of the added noise
        count: Number of source windows
        from_noise: Decode from pure noise instead of the encoded E_sto
        t_infer: Override the number of inference steps
        n: Window length (the checkpoint's when None)
        dn: Forecast horizon used when windowing (the checkpoint's when None)

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        if count < 1:
            raise BadConfig(f"--count must be positive, got {count}")
        model = load_checkpoint(ckpt)
        sched = inference_schedule(model, t_infer)
        samples, inputs = load_windows(data, model, n, dn)
        samples, inputs = samples[:count], inputs[:count]

        if from_noise:
            generated = generate_from_noise(semantic_embeddings(inputs, model), seed, model, sched)
        else:
            generated = generate_variants(inputs, beta, seed, model, sched)

        out.mkdir(parents=True, exist_ok=True)
        for i, (sample, signal) in enumerate(zip(samples, generated)):
            pairs = ((f"source_{i:03d}", sample.input.to_array()), (f"generated_{i:03d}", signal.double().numpy()))
            for name, array in pairs:
                save_recording(_as_recording(array, sample, name), out / f"{name}{RECORDING_SUFFIX}")

        write_run_manifest(
            out,
            "generate",
            {
                "ckpt": ckpt,
                "data": data,
                "out": out,
                "beta": beta,
                "count": count,
                "from_noise": from_noise,
                "t_infer": t_infer,
                "n": n,
                "dn": dn,
            },
            seed,
        )
        print_success(f"Generated {len(samples)} window(s) in {out}", console)
        return 0

    return run_guarded(body, console)
