"""VAE baselines and the swapped semantic encoders built from their trunks."""

from dataclasses import dataclass
from typing import Optional

import torch
from torch import nn

from handheadkit.core.config import ModelConfig
from handheadkit.core.errors import ShapeMismatch
from handheadkit.core.models import SIGNAL_DIM, BaselineKind
from handheadkit.networks.layers import N_JOINTS, ChannelLayerNorm, check_signal
from handheadkit.networks.semantic_encoder import BaseSemanticEncoder


@dataclass
class VAELoss:
    """Loss terms of one VAE batch (all scalars)."""

    total: torch.Tensor
    recon: torch.Tensor
    kl: torch.Tensor


def gaussian_kl(mu: torch.Tensor, logvar: torch.Tensor) -> torch.Tensor:
    """Per-sample KL(q || N(0, I)) divided by the latent size, shape (B,)."""
    return -0.5 * torch.sum(1.0 + logvar - mu.pow(2) - logvar.exp(), dim=1) / mu.shape[1]


def elbo_terms(
    target: torch.Tensor, recon: torch.Tensor, mu: torch.Tensor, logvar: torch.Tensor, kl_weight: float
) -> VAELoss:
    """recon = MSE over all elements, total = recon + kl_weight * mean KL."""
    recon_loss = torch.mean((recon - target) ** 2)
    kl = gaussian_kl(mu, logvar).mean()
    return VAELoss(total=recon_loss + kl_weight * kl, recon=recon_loss, kl=kl)


class _RecurrentTrunk(nn.Module):
    def __init__(self, cell: type[nn.RNNBase], hidden: int):
        super().__init__()
        self.rnn = cell(SIGNAL_DIM, hidden, batch_first=True)

    def forward(self, h: torch.Tensor) -> torch.Tensor:
        out, _ = self.rnn(h.transpose(1, 2))
        return out.mean(dim=1)


class _ConvTrunk(nn.Module):
    def __init__(self, hidden: int):
        super().__init__()
        layers: list[nn.Module] = []
        in_channels = SIGNAL_DIM
        for _ in range(3):
            layers += [nn.Conv1d(in_channels, hidden, kernel_size=3, padding=1), ChannelLayerNorm(hidden), nn.ReLU()]
            in_channels = hidden
        self.net = nn.Sequential(*layers)

    def forward(self, h: torch.Tensor) -> torch.Tensor:
        return self.net(h).mean(dim=2)


class _MLPTrunk(nn.Module):
    def __init__(self, n: int, hidden: int):
        super().__init__()
        self.net = nn.Sequential(
            nn.Flatten(),
            nn.Linear(SIGNAL_DIM * n, hidden),
            nn.LayerNorm(hidden),
            nn.ReLU(),
            nn.Linear(hidden, hidden),
            nn.LayerNorm(hidden),
            nn.ReLU(),
        )

    def forward(self, h: torch.Tensor) -> torch.Tensor:
        return self.net(h)


def build_trunk(kind: BaselineKind, n: int, hidden: int = 32, mlp_hidden: int = 128) -> tuple[nn.Module, int]:
    """
    Build the feature extractor of a baseline encoder.

    Convolutional and recurrent trunks mean-pool over time.

    Returns:
        (module mapping (B, 9, n) to (B, width), width)
    """
    if kind is BaselineKind.CNN:
        return _ConvTrunk(hidden), hidden
    if kind is BaselineKind.LSTM:
        return _RecurrentTrunk(nn.LSTM, hidden), hidden
    if kind is BaselineKind.GRU:
        return _RecurrentTrunk(nn.GRU, hidden), hidden
    return _MLPTrunk(n, mlp_hidden), mlp_hidden


class VAEEncoder(nn.Module):
    """Trunk followed by linear heads for the posterior mean and log-variance."""

    def __init__(self, kind: BaselineKind, n: int, latent_dim: int = 32, hidden: int = 32, mlp_hidden: int = 128):
        super().__init__()
        self.n = n
        self.trunk, width = build_trunk(kind, n, hidden, mlp_hidden)
        self.fc_mu = nn.Linear(width, latent_dim)
        self.fc_logvar = nn.Linear(width, latent_dim)

    def forward(self, h: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        check_signal(h, self.n, "VAE input")
        features = self.trunk(h)
        return self.fc_mu(features), self.fc_logvar(features)


class _ConvDecoder(nn.Module):
    def __init__(self, n: int, latent_dim: int, hidden: int):
        super().__init__()
        self.n = n
        self.hidden = hidden
        self.fc = nn.Linear(latent_dim, hidden * n)
        self.net = nn.Sequential(
            nn.ConvTranspose1d(hidden, hidden, kernel_size=3, padding=1),
            ChannelLayerNorm(hidden),
            nn.ReLU(),
            nn.ConvTranspose1d(hidden, hidden, kernel_size=3, padding=1),
            ChannelLayerNorm(hidden),
            nn.ReLU(),
            nn.ConvTranspose1d(hidden, SIGNAL_DIM, kernel_size=3, padding=1),
        )

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        return self.net(self.fc(z).view(-1, self.hidden, self.n))


class _RecurrentDecoder(nn.Module):
    def __init__(self, cell: type[nn.RNNBase], n: int, latent_dim: int):
        super().__init__()
        self.n = n
        self.rnn = cell(latent_dim, SIGNAL_DIM, batch_first=True)

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        out, _ = self.rnn(z[:, None, :].expand(-1, self.n, -1))
        return out.transpose(1, 2)


class _MLPDecoder(nn.Module):
    def __init__(self, n: int, latent_dim: int, hidden: int):
        super().__init__()
        self.n = n
        self.net = nn.Sequential(
            nn.Linear(latent_dim, hidden), nn.LayerNorm(hidden), nn.ReLU(), nn.Linear(hidden, SIGNAL_DIM * n)
        )

    def forward(self, z: torch.Tensor) -> torch.Tensor:
        return self.net(z).view(-1, SIGNAL_DIM, self.n)


def build_decoder(kind: BaselineKind, n: int, latent_dim: int, hidden: int = 32, mlp_hidden: int = 128) -> nn.Module:
    """Build the decoder mapping (B, latent_dim) to (B, 9, n)."""
    if kind is BaselineKind.CNN:
        return _ConvDecoder(n, latent_dim, hidden)
    if kind is BaselineKind.LSTM:
        return _RecurrentDecoder(nn.LSTM, n, latent_dim)
    if kind is BaselineKind.GRU:
        return _RecurrentDecoder(nn.GRU, n, latent_dim)
    return _MLPDecoder(n, latent_dim, mlp_hidden)


class VAEBaseline(nn.Module):
    """
    Variational autoencoder baseline of one network family.

    Reconstruction at evaluation time decodes the posterior mean.
    """

    def __init__(
        self,
        kind: BaselineKind,
        n: int = 40,
        latent_dim: int = 32,
        hidden: int = 32,
        mlp_hidden: int = 128,
        kl_weight: float = 1e-3,
    ):
        super().__init__()
        self.kind = kind
        self.n = n
        self.latent_dim = latent_dim
        self.kl_weight = kl_weight
        self.config: Optional[ModelConfig] = None
        self.encoder = VAEEncoder(kind, n, latent_dim, hidden, mlp_hidden)
        self.decoder = build_decoder(kind, n, latent_dim, hidden, mlp_hidden)

    def encode(self, h: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Return (mu, logvar), each (B, latent_dim)."""
        return self.encoder(h)

    def decode(self, z: torch.Tensor) -> torch.Tensor:
        """Decode latents (B, latent_dim) to signals (B, 9, n)."""
        if z.ndim != 2 or z.shape[1] != self.latent_dim:
            raise ShapeMismatch(f"Latent must have shape (B, {self.latent_dim}), got {tuple(z.shape)}")
        return self.decoder(z)

    def loss(self, h: torch.Tensor, generator: Optional[torch.Generator] = None) -> VAELoss:
        """Reparameterised ELBO terms of a batch."""
        mu, logvar = self.encode(h)
        xi = torch.randn(mu.shape, generator=generator, dtype=mu.dtype, device=mu.device)
        z = mu + torch.exp(0.5 * logvar) * xi
        return elbo_terms(h, self.decode(z), mu, logvar, self.kl_weight)

    def forward(self, h: torch.Tensor) -> torch.Tensor:
        mu, _ = self.encode(h)
        return self.decode(mu)


class BaselineSemanticEncoder(BaseSemanticEncoder):
    """
    Semantic encoder built from a baseline trunk.

    E_sem is a linear map of the trunk features; the forecaster's feature map is a linear
    function of E_sem reshaped to (C, 3, n/4).
    """

    def __init__(
        self,
        kind: BaselineKind,
        n: int = 40,
        channels: int = 16,
        semantic_dim: int = 128,
        hidden: int = 32,
        mlp_hidden: int = 128,
    ):
        super().__init__()
        if n % 4 != 0:
            raise ShapeMismatch(f"Sequence length must be divisible by 4, got {n}")
        self.n = n
        self.semantic_dim = semantic_dim
        self.feature_channels = channels
        self.feature_length = n // 4
        self.trunk, width = build_trunk(kind, n, hidden, mlp_hidden)
        self.project = nn.Linear(width, semantic_dim)
        self.feature_map = nn.Linear(semantic_dim, channels * N_JOINTS * self.feature_length)

    def forward(self, h: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        check_signal(h, self.n, "encoder input")
        e_sem = self.project(self.trunk(h))
        features = self.feature_map(e_sem).view(-1, self.feature_channels, N_JOINTS, self.feature_length)
        return e_sem, features
