"""Small building blocks shared by the networks."""

import torch
from einops import rearrange
from torch import nn

from handheadkit.core.errors import ShapeMismatch
from handheadkit.core.models import SIGNAL_DIM

# Graph joint order used by the semantic encoder and the forecaster.
JOINT_HEAD, JOINT_LEFT, JOINT_RIGHT = 0, 1, 2
N_JOINTS = 3


class ChannelLayerNorm(nn.Module):
    """Layer normalisation over dim 1 (channels), applied independently at every other position."""

    def __init__(self, channels: int):
        super().__init__()
        self.norm = nn.LayerNorm(channels)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.norm(x.movedim(1, -1)).movedim(-1, 1)


def check_signal(h: torch.Tensor, length: int, name: str = "signal") -> None:
    """Raise ShapeMismatch unless ``h`` is a (B, 9, length) batch."""
    if h.ndim != 3 or h.shape[1] != SIGNAL_DIM or h.shape[2] != length:
        raise ShapeMismatch(f"{name} must have shape (B, {SIGNAL_DIM}, {length}), got {tuple(h.shape)}")


def signal_to_graph(h: torch.Tensor) -> torch.Tensor:
    """
    Re-lay a (B, 9, L) signal as graph features (B, 3 coords, 3 joints, L).

    Joints are ordered [head, left hand, right hand].
    """
    parts = rearrange(h, "b (v c) l -> b c v l", v=N_JOINTS)  # parts ordered [left, right, head]
    return parts[:, :, [2, 0, 1], :]


def graph_to_signal(g: torch.Tensor) -> torch.Tensor:
    """Inverse of :func:`signal_to_graph`."""
    parts = g[:, :, [JOINT_LEFT, JOINT_RIGHT, JOINT_HEAD], :]
    return rearrange(parts, "b c v l -> b (v c) l")


def zero_module(module: nn.Module) -> nn.Module:
    """Zero every parameter of ``module`` in place and return it."""
    for p in module.parameters():
        nn.init.zeros_(p)
    return module
