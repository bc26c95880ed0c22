"""Diffusion autoencoder: semantic encoder, noise-predicting UNet and forecasting heads."""

from typing import Optional, Union

import torch
from torch import nn

from handheadkit.core.config import ModelConfig
from handheadkit.core.diffusion import DiffusionSchedule, TimeStep, make_schedule
from handheadkit.core.models import HAND_CHANNELS, HEAD_CHANNELS
from handheadkit.networks.baselines import BaselineSemanticEncoder, VAEBaseline
from handheadkit.networks.forecaster import Forecaster, ForecastOutput
from handheadkit.networks.noise_predictor import NoisePredictorUNet
from handheadkit.networks.semantic_encoder import BaseSemanticEncoder, SemanticEncoder

Model = Union["HandHeadAutoencoder", VAEBaseline]


class HandHeadAutoencoder(nn.Module):
    """
    Encoder, UNet and forecaster trained together.

    The networks operate on scaled signals: hand channels divided by ``signal_scale``.
    """

    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.encoder = build_semantic_encoder(config)
        self.unet = NoisePredictorUNet(
            channels=config.unet_channels,
            time_dim=config.time_dim,
            semantic_dim=config.semantic_dim,
            groups=config.gn_groups,
            dropout=config.dropout,
            max_step=config.t_train,
            zero_init=config.zero_init,
        )
        self.forecaster = Forecaster(channels=self.encoder.feature_channels, dn=config.dn)
        self.schedule: DiffusionSchedule = make_schedule(
            t_train=config.t_train, beta_start=config.beta_start, beta_end=config.beta_end, t_infer=config.t_infer
        )

    def encode_semantic(self, h0: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (E_sem, feature map) of a scaled batch."""
        return self.encoder(h0)

    def predict_noise(self, h_t: torch.Tensor, t: TimeStep, e_sem: torch.Tensor) -> torch.Tensor:
        return self.unet(h_t, t, e_sem)

    def forecast(self, features: torch.Tensor) -> ForecastOutput:
        return self.forecaster(features)


def build_semantic_encoder(config: ModelConfig) -> BaseSemanticEncoder:
    """GCN encoder for the main variant, a baseline trunk for the swapped-encoder variants."""
    kind = config.variant.baseline_kind
    if kind is None:
        return SemanticEncoder(
            n=config.n, channels=config.encoder_channels, semantic_dim=config.semantic_dim, dropout=config.dropout
        )
    return BaselineSemanticEncoder(
        kind,
        n=config.n,
        channels=config.encoder_channels,
        semantic_dim=config.semantic_dim,
        hidden=config.baseline_hidden,
        mlp_hidden=config.mlp_hidden,
    )


def build_model(config: ModelConfig, seed: Optional[int] = None) -> Model:
    """
    Instantiate the network described by ``config``.

    Args:
        config: Model configuration
        seed: Seeds torch's global generator before initialisation when given

    Returns:
        HandHeadAutoencoder or, for ``vae-*`` variants, a VAEBaseline
    """
    if seed is not None:
        torch.manual_seed(seed)
    if config.variant.is_vae:
        kind = config.variant.baseline_kind
        assert kind is not None
        vae = VAEBaseline(
            kind,
            n=config.n,
            latent_dim=config.latent_dim,
            hidden=config.baseline_hidden,
            mlp_hidden=config.mlp_hidden,
            kl_weight=config.kl_weight,
        )
        vae.config = config
        return vae
    return HandHeadAutoencoder(config)


def model_config_of(model: Model) -> ModelConfig:
    """Configuration a model was built from."""
    config = getattr(model, "config", None)
    if config is None:
        raise AttributeError(f"{type(model).__name__} carries no ModelConfig")
    return config


def scale_signal(h: torch.Tensor, signal_scale: float) -> torch.Tensor:
    """Metres to model space: hand channels divided by ``signal_scale``."""
    out = h.clone()
    out[:, HAND_CHANNELS] = h[:, HAND_CHANNELS] / signal_scale
    return out


def unscale_signal(h: torch.Tensor, signal_scale: float) -> torch.Tensor:
    """Model space back to metres."""
    out = h.clone()
    out[:, HAND_CHANNELS] = h[:, HAND_CHANNELS] * signal_scale
    return out


def renormalize_heads(h: torch.Tensor) -> torch.Tensor:
    """Rescale the head-direction columns of a (B, 9, N) batch to unit length."""
    out = h.clone()
    heads = h[:, HEAD_CHANNELS]
    out[:, HEAD_CHANNELS] = heads / heads.norm(dim=1, keepdim=True).clamp_min(1e-12)
    return out
