"""Auxiliary forecasting heads over the semantic encoder's feature map."""

import logging
from dataclasses import dataclass

import torch
import torch.nn.functional as F
from einops import rearrange
from torch import nn

from handheadkit.core.errors import ShapeMismatch
from handheadkit.networks.layers import JOINT_HEAD, N_JOINTS, ChannelLayerNorm

logger = logging.getLogger(__name__)

MIN_COLUMN_NORM = 1e-8
FALLBACK_DIRECTION = (0.0, 0.0, 1.0)


@dataclass
class ForecastOutput:
    """
    Predicted future frames.

    Attributes:
        ha_future: (B, 6, dn) hand positions
        he_future: (B, 3, dn) unit head directions
        degenerate: (B, dn) True where the raw head column was too short to normalise
    """

    ha_future: torch.Tensor
    he_future: torch.Tensor
    degenerate: torch.Tensor

    def as_signal(self) -> torch.Tensor:
        """Stack into the (B, 9, dn) signal layout."""
        return torch.cat([self.ha_future, self.he_future], dim=1)


def unit_columns(raw: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Normalise the columns of a (B, 3, dn) tensor.

    A column with norm below 1e-8 takes the previous column's direction; a degenerate first
    column falls back to (0, 0, 1).

    Returns:
        (unit columns, degenerate mask of shape (B, dn))
    """
    norms = raw.norm(dim=1)
    degenerate = norms < MIN_COLUMN_NORM
    unit = raw / norms.clamp_min(MIN_COLUMN_NORM)[:, None, :]
    if not bool(degenerate.any()):
        return unit, degenerate

    logger.debug(f"Replacing {int(degenerate.sum())} degenerate forecast head direction(s)")
    previous = torch.tensor(FALLBACK_DIRECTION, dtype=raw.dtype, device=raw.device).expand(raw.shape[0], 3)
    columns = []
    for j in range(raw.shape[2]):
        column = torch.where(degenerate[:, j, None], previous, unit[:, :, j])
        columns.append(column)
        previous = column
    return torch.stack(columns, dim=2), degenerate


class _Branch(nn.Module):
    """Conv(k=3) -> LN -> Tanh -> Conv(k=1) -> Tanh -> adaptive pool to the horizon."""

    def __init__(self, in_channels: int, out_channels: int, horizon: int):
        super().__init__()
        self.horizon = horizon
        self.conv1 = nn.Conv1d(in_channels, in_channels, kernel_size=3, padding=1)
        self.norm = ChannelLayerNorm(in_channels)
        self.conv2 = nn.Conv1d(in_channels, out_channels, kernel_size=1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = torch.tanh(self.norm(self.conv1(x)))
        x = torch.tanh(self.conv2(x))
        return F.adaptive_avg_pool1d(x, self.horizon)


class Forecaster(nn.Module):
    """
    Hand and head forecasting branches.

    The hand branch reads the two hand joints (2C channels), the head branch the head joint
    (C channels) of the (B, C, 3, L) feature map.
    """

    def __init__(self, channels: int = 16, dn: int = 3):
        super().__init__()
        self.channels = channels
        self.dn = dn
        self.hand = _Branch(2 * channels, 6, dn)
        self.head = _Branch(channels, 3, dn)

    def forward(self, features: torch.Tensor) -> ForecastOutput:
        if features.ndim != 4 or features.shape[1] != self.channels or features.shape[2] != N_JOINTS:
            raise ShapeMismatch(
                f"Forecaster expects (B, {self.channels}, {N_JOINTS}, L), got {tuple(features.shape)}"
            )
        batch = features.shape[0]
        if self.dn == 0:
            empty = features.new_zeros(batch, 6, 0)
            return ForecastOutput(empty, features.new_zeros(batch, 3, 0), torch.zeros(batch, 0, dtype=torch.bool))

        hands = rearrange(features[:, :, JOINT_HEAD + 1 :], "b c v l -> b (v c) l")
        ha_future = self.hand(hands)
        he_future, degenerate = unit_columns(self.head(features[:, :, JOINT_HEAD]))
        return ForecastOutput(ha_future=ha_future, he_future=he_future, degenerate=degenerate)
