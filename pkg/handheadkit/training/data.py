"""Dataset plumbing: recordings to windowed samples to tensors."""

import logging
from typing import Sequence

import numpy as np
import torch
from torch.utils.data import DataLoader, TensorDataset

from handheadkit.core.errors import EmptyDataset
from handheadkit.core.models import Recording, Sample
from handheadkit.core.signals import to_relative_recording, window

logger = logging.getLogger(__name__)


def window_corpus(recordings: Sequence[Recording], n: int, dn: int, stride: int) -> list[Sample]:
    """
    Window every recording of a corpus, converting world recordings to relative first.

    Recordings shorter than one window contribute nothing (with a TooShortWarning).
    """
    samples: list[Sample] = []
    for recording in recordings:
        samples.extend(window(to_relative_recording(recording), n, dn, stride))
    logger.info(f"Cut {len(samples)} samples (n={n}, dn={dn}, stride={stride}) from {len(recordings)} recording(s)")
    return samples


def samples_to_tensors(
    samples: Sequence[Sample], dtype: torch.dtype = torch.float32
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Stack samples into (S, 9, N) inputs and (S, 9, dn) futures.

    Raises:
        EmptyDataset: If there are no samples
    """
    if not samples:
        raise EmptyDataset("No samples to stack")
    inputs = np.stack([s.input.to_array() for s in samples])
    futures = np.stack([s.future.to_array() for s in samples])
    return torch.as_tensor(inputs, dtype=dtype), torch.as_tensor(futures, dtype=dtype)


def make_loader(
    inputs: torch.Tensor,
    futures: torch.Tensor,
    batch_size: int,
    shuffle: bool = True,
    seed: int = 0,
    workers: int = 0,
) -> DataLoader:
    """Batches of (inputs, futures); the shuffle order depends only on ``seed``."""
    generator = torch.Generator().manual_seed(seed)
    return DataLoader(
        TensorDataset(inputs, futures),
        batch_size=batch_size,
        shuffle=shuffle,
        generator=generator,
        num_workers=workers,
    )


def label_values(samples: Sequence[Sample], key: str) -> list[str]:
    """Label ``key`` of every sample ("" when missing)."""
    return [s.labels.get(key, "") for s in samples]
