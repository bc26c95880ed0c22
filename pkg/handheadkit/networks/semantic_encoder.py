"""Graph-convolutional semantic encoder."""

import math
from abc import ABC, abstractmethod

import torch
import torch.nn.functional as F
from einops import rearrange
from torch import nn

from handheadkit.core.errors import ShapeMismatch
from handheadkit.networks.layers import N_JOINTS, ChannelLayerNorm, check_signal, signal_to_graph


class BaseSemanticEncoder(nn.Module, ABC):
    """
    Maps a (B, 9, N) hand-head batch to its semantic embedding and a feature map.

    Subclasses set ``semantic_dim``, ``feature_channels`` and ``feature_length`` so the
    forecaster can be sized from any encoder.
    """

    semantic_dim: int
    feature_channels: int
    feature_length: int

    @abstractmethod
    def forward(self, h: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """
        Encode a batch.

        Returns:
            (E_sem of shape (B, semantic_dim), features of shape (B, C, 3, feature_length))
        """
        pass


class STGCN(nn.Module):
    """
    Spatial-temporal graph convolution over dense learnable graphs.

    Temporal mixing with A_T (L x L), a per-node feature map W (C_in x C_out), then spatial
    mixing with A_S (3 x 3). No bias; the layer is linear in its input.
    """

    def __init__(self, in_channels: int, out_channels: int, length: int, n_joints: int = N_JOINTS):
        super().__init__()
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.length = length
        self.n_joints = n_joints
        self.temporal_adj = nn.Parameter(torch.empty(length, length))
        self.weight = nn.Parameter(torch.empty(in_channels, out_channels))
        self.spatial_adj = nn.Parameter(torch.empty(n_joints, n_joints))
        self.reset_parameters()

    def reset_parameters(self) -> None:
        bound = 1.0 / math.sqrt(self.in_channels)
        nn.init.uniform_(self.weight, -bound, bound)
        # identity-biased graphs pass the signal through at initialisation
        with torch.no_grad():
            self.temporal_adj.copy_(torch.eye(self.length) + 0.01 * torch.randn(self.length, self.length))
            self.spatial_adj.copy_(torch.eye(self.n_joints) + 0.01 * torch.randn(self.n_joints, self.n_joints))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        expected = (self.in_channels, self.n_joints, self.length)
        if x.ndim != 4 or tuple(x.shape[1:]) != expected:
            raise ShapeMismatch(f"STGCN expects (B, {', '.join(map(str, expected))}), got {tuple(x.shape)}")
        y = torch.einsum("bcvm,ml->bcvl", x, self.temporal_adj)
        y = torch.einsum("bcvl,co->bovl", y, self.weight)
        return torch.einsum("vw,bowl->bovl", self.spatial_adj, y)


class GCNBlock(nn.Module):
    """Residual block: x + Dropout(Tanh(LN(STGCN(x)))), LN over channels."""

    def __init__(self, channels: int, length: int, dropout: float = 0.1):
        super().__init__()
        self.gcn = STGCN(channels, channels, length)
        self.norm = ChannelLayerNorm(channels)
        self.dropout = nn.Dropout(dropout)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return x + self.dropout(torch.tanh(self.norm(self.gcn(x))))


class SemanticEncoder(BaseSemanticEncoder):
    """
    GCN semantic encoder.

    STGCN(3 -> C) followed by three residual modules of two GCN blocks each, with a temporal
    average pool (kernel 2) after the first two modules. The (C, 3, N/4) feature map is
    flattened over joints, pooled to length one and mapped by a 1x1 convolution to E_sem.
    """

    def __init__(self, n: int = 40, channels: int = 16, semantic_dim: int = 128, dropout: float = 0.1):
        super().__init__()
        if n % 4 != 0:
            raise ShapeMismatch(f"Sequence length must be divisible by 4, got {n}")
        self.n = n
        self.semantic_dim = semantic_dim
        self.feature_channels = channels
        self.feature_length = n // 4

        self.input_gcn = STGCN(3, channels, n)
        self.stages = nn.ModuleList(
            nn.Sequential(GCNBlock(channels, length, dropout), GCNBlock(channels, length, dropout))
            for length in (n, n // 2, n // 4)
        )
        self.project = nn.Conv1d(N_JOINTS * channels, semantic_dim, kernel_size=1)

    def forward(self, h: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        check_signal(h, self.n, "encoder input")
        x = self.input_gcn(signal_to_graph(h))
        for i, stage in enumerate(self.stages):
            x = stage(x)
            if i < len(self.stages) - 1:
                x = F.avg_pool2d(x, kernel_size=(1, 2))
        features = x
        pooled = F.adaptive_avg_pool1d(rearrange(features, "b c v l -> b (v c) l"), 1)
        e_sem = self.project(pooled).squeeze(-1)
        return e_sem, features
