"""Helpers shared by the CLI commands."""

import logging
from pathlib import Path
from typing import Callable, Optional

import torch
from rich.console import Console

from handheadkit.core.diffusion import DiffusionSchedule, make_schedule
from handheadkit.core.errors import BadConfig, HandHeadError
from handheadkit.core.models import Sample
from handheadkit.networks.autoencoder import Model, model_config_of
from handheadkit.storage.recordings import load_corpus
from handheadkit.training.data import samples_to_tensors, window_corpus
from handheadkit.utils.ui import print_error
from handheadkit.utils.validation import check_window

logger = logging.getLogger(__name__)

# Window stride used when clustering, probing and generating; eval defaults to n
ANALYSIS_STRIDE = 10


def run_guarded(action: Callable[[], int], console: Optional[Console] = None) -> int:
    """
    Run a command body, turning domain and I/O errors into exit code 1.

    Args:
        action: Command body returning an exit code
        console: Console for the error message

    Returns:
        The body's exit code, or 1 if it raised
    """
    try:
        return action()
    except (HandHeadError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        print_error(str(e), console)
        return 1


def inference_schedule(model: Model, t_infer: Optional[int]) -> Optional[DiffusionSchedule]:
    """The model's schedule, re-gridded to ``t_infer`` steps when given."""
    if t_infer is None:
        return None
    config = model_config_of(model)
    return make_schedule(config.t_train, config.beta_start, config.beta_end, t_infer)


def load_windows(
    data: Path,
    model: Model,
    n: Optional[int] = None,
    dn: Optional[int] = None,
    stride: Optional[int] = ANALYSIS_STRIDE,
) -> tuple[list[Sample], torch.Tensor]:
    """
    Window a recording directory to the checkpoint's input length.

    A ``stride`` of None uses the window length, so windows do not overlap.

    Raises:
        BadConfig: If ``n`` is given and differs from the model's window length
    """
    config = model_config_of(model)
    n = config.n if n is None else n
    dn = config.dn if dn is None else dn
    stride = n if stride is None else stride
    check_window(n, dn, stride)
    if n != config.n:
        raise BadConfig(f"Checkpoint expects windows of {config.n} frames, got --n {n}")
    samples = window_corpus(load_corpus(data), n, dn, stride)
    inputs, _ = samples_to_tensors(samples)
    return samples, inputs
