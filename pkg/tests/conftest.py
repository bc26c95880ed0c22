"""Pytest fixtures for handheadkit tests."""

import tempfile
from pathlib import Path
from typing import Callable, Generator

import numpy as np
import pytest
import torch

from handheadkit.core.config import ModelConfig, SynthConfig
from handheadkit.core.models import Coords, HandHeadFrame, MotionFamily, Recording, RecordingMeta
from handheadkit.core.signals import synth_generate
from handheadkit.storage.recordings import save_recording


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def tiny_config() -> ModelConfig:
    """Reduced autoencoder: short windows, narrow layers, 5 DDIM steps."""
    return ModelConfig(
        n=8,
        dn=2,
        encoder_channels=4,
        semantic_dim=8,
        unet_channels=8,
        time_dim=8,
        gn_groups=2,
        dropout=0.0,
        t_train=100,
        t_infer=5,
    )


@pytest.fixture
def signal_batch() -> torch.Tensor:
    """Random (4, 9, 8) float32 batch with unit head columns."""
    generator = torch.Generator().manual_seed(0)
    h = 0.3 * torch.randn(4, 9, 8, generator=generator)
    h[:, 6:9] = h[:, 6:9] / h[:, 6:9].norm(dim=1, keepdim=True)
    return h


def make_relative_recording(n_frames: int, name: str = "rec", user: str = "u0", activity: str = "idle") -> Recording:
    """Relative recording whose hands drift linearly and head looks forward."""
    frames = [
        HandHeadFrame(ha=(0.01 * t, 0.0, 0.3, -0.2, -0.4, 0.3), he=(0.0, 0.0, 1.0), t=t) for t in range(n_frames)
    ]
    meta = RecordingMeta(fps=30.0, user=user, activity=activity, coords=Coords.RELATIVE)
    return Recording(meta=meta, frames=frames, name=name)


@pytest.fixture
def relative_recording() -> Recording:
    """100-frame relative recording."""
    return make_relative_recording(100)


@pytest.fixture
def recording_factory() -> Callable[..., Recording]:
    """Build relative recordings of a given length (see make_relative_recording)."""
    return make_relative_recording


@pytest.fixture
def synth_corpus_dir(temp_dir: Path) -> Path:
    """Directory with six short synthetic recordings (2 families x 3 users)."""
    data = temp_dir / "data"
    for fi, family in enumerate((MotionFamily.REACH, MotionFamily.BIMANUAL)):
        for ui in range(3):
            config = SynthConfig(family=family, user=f"u{ui}", n_frames=60)
            recording = synth_generate(config, seed=10 * fi + ui)
            save_recording(recording, data / f"{recording.name}.jsonl")
    return data


@pytest.fixture
def blob_embeddings() -> tuple[np.ndarray, np.ndarray]:
    """
    Two separable arcs of 50 unit vectors each, pointing in opposite directions.

    Returns:
        (embeddings of shape (100, 3), true labels)
    """
    angles = np.linspace(-0.15, 0.15, 50)
    arc = np.stack([np.cos(angles), np.sin(angles), np.zeros_like(angles)], axis=1)
    embeddings = np.concatenate([arc, -arc])
    labels = np.array([0] * 50 + [1] * 50)
    return embeddings, labels
