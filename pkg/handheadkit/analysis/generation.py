"""Hand-head movement generation from perturbed or random stochastic embeddings."""

import logging
from typing import Optional

import torch

from handheadkit.core.diffusion import DiffusionSchedule
from handheadkit.core.errors import BadConfig
from handheadkit.core.models import SIGNAL_DIM
from handheadkit.networks.autoencoder import HandHeadAutoencoder
from handheadkit.training.trainer import decode_to_metres, encode, reconstruct

logger = logging.getLogger(__name__)


def _require_autoencoder(model: object) -> HandHeadAutoencoder:
    if not isinstance(model, HandHeadAutoencoder):
        raise BadConfig("Generation needs a diffusion autoencoder checkpoint, not a VAE baseline")
    return model


def generate_variants(
    h0: torch.Tensor,
    beta: float,
    seed: int,
    model: HandHeadAutoencoder,
    sched: Optional[DiffusionSchedule] = None,
) -> torch.Tensor:
    """
    Decode E_sto + beta * z with the original E_sem.

    With beta = 0 this is exactly :func:`reconstruct`.

    Args:
        h0: (B, 9, N) source windows in metres
        beta: Randomness weight (>= 0)
        seed: Seed of z
        model: Trained autoencoder
        sched: Inference schedule (the model's own when None)

    Returns:
        (B, 9, N) generated windows in metres with unit head columns
    """
    model = _require_autoencoder(model)
    if beta < 0:
        raise BadConfig(f"beta must be non-negative, got {beta}")
    if beta == 0:
        return reconstruct(h0, model, sched)

    e_sem, e_sto = encode(h0, model, sched)
    generator = torch.Generator().manual_seed(seed)
    z = torch.randn(e_sto.shape, generator=generator, dtype=e_sto.dtype, device=e_sto.device)
    logger.debug(f"Generating {h0.shape[0]} variant(s) with beta={beta}, seed={seed}")
    return decode_to_metres(e_sto + beta * z, e_sem, model, sched)


def generate_from_noise(
    e_sem: torch.Tensor,
    seed: int,
    model: HandHeadAutoencoder,
    sched: Optional[DiffusionSchedule] = None,
    n: Optional[int] = None,
) -> torch.Tensor:
    """
    Decode pure Gaussian noise conditioned on semantic embeddings.

    Args:
        e_sem: (B, semantic_dim) conditioning embeddings
        seed: Seed of the noise
        model: Trained autoencoder
        sched: Inference schedule (the model's own when None)
        n: Window length (the model's when None)
    """
    model = _require_autoencoder(model)
    length = n or model.config.n
    generator = torch.Generator().manual_seed(seed)
    z = torch.randn((e_sem.shape[0], SIGNAL_DIM, length), generator=generator, dtype=e_sem.dtype)
    return decode_to_metres(z.to(e_sem.device), e_sem, model, sched)
