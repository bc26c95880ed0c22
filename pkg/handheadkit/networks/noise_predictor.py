"""Conditional 1D UNet that estimates the noise in a hand-head signal."""

import math
from typing import Union

import torch
import torch.nn.functional as F
from torch import nn

from handheadkit.core.errors import OutOfRange, ShapeMismatch
from handheadkit.core.models import SIGNAL_DIM
from handheadkit.networks.layers import check_signal, zero_module


def sinusoidal_embedding(t: torch.Tensor, dim: int) -> torch.Tensor:
    """
    Sinusoidal encoding of time steps.

    The first half of the output holds sines, the second half cosines, with log-spaced
    frequencies from 1 down to 1e-4.

    Args:
        t: (B,) time steps
        dim: Even embedding width

    Returns:
        (B, dim) tensor
    """
    half = dim // 2
    exponent = torch.arange(half, dtype=torch.float64, device=t.device) / max(half - 1, 1)
    freqs = torch.exp(-math.log(10_000.0) * exponent)
    args = t.to(torch.float64)[:, None] * freqs[None, :]
    return torch.cat([torch.sin(args), torch.cos(args)], dim=1)


class TimeEmbedding(nn.Module):
    """Sinusoidal encoding followed by Linear -> SiLU -> Linear."""

    def __init__(self, dim: int = 128, max_step: int = 1000):
        super().__init__()
        self.dim = dim
        self.max_step = max_step
        self.mlp = nn.Sequential(nn.Linear(dim, dim), nn.SiLU(), nn.Linear(dim, dim))

    def forward(self, t: torch.Tensor) -> torch.Tensor:
        if t.numel() and (int(t.min()) < 0 or int(t.max()) > self.max_step):
            raise OutOfRange(f"Time steps must lie in [0, {self.max_step}]")
        dtype = self.mlp[0].weight.dtype
        return self.mlp(sinusoidal_embedding(t, self.dim).to(dtype))


class ResidualBlock(nn.Module):
    """
    Conditioned residual block.

    GN -> SiLU -> Conv -> GN, then h * (1 + s_t) + b_t from the time embedding and + b_s from
    the semantic embedding, then SiLU -> Dropout -> Conv, added to the block input.
    """

    def __init__(
        self,
        channels: int,
        time_dim: int,
        semantic_dim: int,
        groups: int = 8,
        dropout: float = 0.1,
        zero_init: bool = True,
    ):
        super().__init__()
        self.channels = channels
        self.norm1 = nn.GroupNorm(groups, channels)
        self.conv1 = nn.Conv1d(channels, channels, kernel_size=3, padding=1)
        self.norm2 = nn.GroupNorm(groups, channels)
        self.time_proj = nn.Sequential(nn.SiLU(), nn.Linear(time_dim, 2 * channels))
        self.semantic_proj = nn.Sequential(nn.SiLU(), nn.Linear(semantic_dim, channels))
        self.dropout = nn.Dropout(dropout)
        self.conv2 = nn.Conv1d(channels, channels, kernel_size=3, padding=1)
        if zero_init:
            zero_module(self.conv2)

    def forward(self, x: torch.Tensor, e_t: torch.Tensor, e_sem: torch.Tensor) -> torch.Tensor:
        if x.ndim != 3 or x.shape[1] != self.channels:
            raise ShapeMismatch(f"Residual block expects (B, {self.channels}, L), got {tuple(x.shape)}")
        h = self.norm2(self.conv1(F.silu(self.norm1(x))))
        scale, shift = self.time_proj(e_t).chunk(2, dim=1)
        h = h * (1.0 + scale[:, :, None]) + shift[:, :, None]
        h = h + self.semantic_proj(e_sem)[:, :, None]
        h = self.conv2(self.dropout(F.silu(h)))
        return x + h


class ResConv1D(nn.Module):
    """Two conditioned residual blocks in sequence."""

    def __init__(self, channels: int, time_dim: int, semantic_dim: int, groups: int, dropout: float, zero_init: bool):
        super().__init__()
        self.blocks = nn.ModuleList(
            ResidualBlock(channels, time_dim, semantic_dim, groups, dropout, zero_init) for _ in range(2)
        )

    def forward(self, x: torch.Tensor, e_t: torch.Tensor, e_sem: torch.Tensor) -> torch.Tensor:
        for block in self.blocks:
            x = block(x, e_t, e_sem)
        return x


class Upsample(nn.Module):
    """Nearest-neighbour x2 upsampling followed by a k=3 convolution."""

    def __init__(self, channels: int):
        super().__init__()
        self.conv = nn.Conv1d(channels, channels, kernel_size=3, padding=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.conv(F.interpolate(x, scale_factor=2, mode="nearest"))


class NoisePredictorUNet(nn.Module):
    """
    Two-level UNet over (B, 9, N) signals conditioned on the time step and E_sem.

    Encoder: ResConv1D at N, N/2 and N/4 with average-pool downsampling. Decoder: two rounds
    of upsample, skip addition and ResConv1D. The head maps back to nine channels.
    """

    def __init__(
        self,
        channels: int = 64,
        time_dim: int = 128,
        semantic_dim: int = 128,
        groups: int = 8,
        dropout: float = 0.1,
        max_step: int = 1000,
        zero_init: bool = True,
    ):
        super().__init__()
        self.semantic_dim = semantic_dim
        self.stem = nn.Conv1d(SIGNAL_DIM, channels, kernel_size=3, padding=1)
        self.time_embedding = TimeEmbedding(time_dim, max_step)

        def level() -> ResConv1D:
            return ResConv1D(channels, time_dim, semantic_dim, groups, dropout, zero_init)

        self.down1 = level()
        self.down2 = level()
        self.bottleneck = level()
        self.up2 = Upsample(channels)
        self.dec2 = level()
        self.up1 = Upsample(channels)
        self.dec1 = level()
        self.head = nn.Sequential(
            nn.GroupNorm(groups, channels),
            nn.SiLU(),
            nn.Conv1d(channels, SIGNAL_DIM, kernel_size=3, padding=1),
        )
        if zero_init:
            zero_module(self.head[-1])

    def forward(self, h_t: torch.Tensor, t: Union[int, torch.Tensor], e_sem: torch.Tensor) -> torch.Tensor:
        if h_t.ndim != 3 or h_t.shape[2] % 4 != 0:
            raise ShapeMismatch(f"UNet input length must be divisible by 4, got shape {tuple(h_t.shape)}")
        check_signal(h_t, h_t.shape[2], "UNet input")
        if e_sem.shape != (h_t.shape[0], self.semantic_dim):
            raise ShapeMismatch(
                f"E_sem must have shape ({h_t.shape[0]}, {self.semantic_dim}), got {tuple(e_sem.shape)}"
            )

        steps = torch.as_tensor(t, device=h_t.device)
        if steps.ndim == 0:
            steps = steps.expand(h_t.shape[0])
        e_t = self.time_embedding(steps)

        x = self.stem(h_t)
        skip1 = self.down1(x, e_t, e_sem)
        skip2 = self.down2(F.avg_pool1d(skip1, 2), e_t, e_sem)
        x = self.bottleneck(F.avg_pool1d(skip2, 2), e_t, e_sem)
        x = self.dec2(self.up2(x) + skip2, e_t, e_sem)
        x = self.dec1(self.up1(x) + skip1, e_t, e_sem)
        return self.head(x)
