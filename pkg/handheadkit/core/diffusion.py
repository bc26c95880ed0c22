"""Noise schedule, forward noising and deterministic DDIM decoding/encoding."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Protocol, Union

import numpy as np
import torch

from handheadkit.core.errors import BadConfig, OutOfRange

logger = logging.getLogger(__name__)

TimeStep = Union[int, torch.Tensor]


class NoisePredictor(Protocol):
    """Anything that estimates the noise in ``h_t`` given the time step and semantic embedding."""

    def predict_noise(self, h_t: torch.Tensor, t: TimeStep, e_sem: torch.Tensor) -> torch.Tensor: ...


@dataclass(frozen=True)
class DiffusionSchedule:
    """
    Noise levels of the training grid and the inference sub-grid.

    Attributes:
        betas: beta_1..beta_T (index 0 holds beta_1)
        alphas_cumprod: alpha-bar_0..alpha-bar_T with alpha-bar_0 = 1
        infer_steps: Strictly increasing inference grid ending at T
    """

    betas: np.ndarray
    alphas_cumprod: np.ndarray
    infer_steps: tuple[int, ...]

    @property
    def t_train(self) -> int:
        return int(self.betas.shape[0])

    @property
    def t_infer(self) -> int:
        return len(self.infer_steps)

    def alpha_bar(self, t: int) -> float:
        """Cumulative signal level at step t (t=0 gives 1)."""
        if not 0 <= t <= self.t_train:
            raise OutOfRange(f"Time step {t} outside [0, {self.t_train}]")
        return float(self.alphas_cumprod[t])

    def grid(self) -> tuple[int, ...]:
        """Inference grid including the clean end point 0."""
        return (0,) + self.infer_steps

    def to_dict(self) -> dict[str, Any]:
        """Parameters needed to rebuild the schedule."""
        return {
            "t_train": self.t_train,
            "t_infer": self.t_infer,
            "beta_start": float(self.betas[0]),
            "beta_end": float(self.betas[-1]),
        }


def make_schedule(
    t_train: int = 1000, beta_start: float = 1e-4, beta_end: float = 0.02, t_infer: int = 100
) -> DiffusionSchedule:
    """
    Build a linear beta schedule and an evenly strided inference grid.

    Raises:
        BadConfig: If the betas are not in (0, 1) with start <= end, or t_infer does not divide t_train
    """
    if not 0.0 < beta_start <= beta_end < 1.0:
        raise BadConfig(f"Need 0 < beta_start <= beta_end < 1, got {beta_start}, {beta_end}")
    if t_train < 1 or t_infer < 1 or t_train % t_infer != 0:
        raise BadConfig(f"t_infer ({t_infer}) must divide t_train ({t_train})")

    betas = np.linspace(beta_start, beta_end, t_train, dtype=np.float64)
    alphas_cumprod = np.concatenate([[1.0], np.cumprod(1.0 - betas)])
    step = t_train // t_infer
    infer_steps = tuple(range(step, t_train + 1, step))
    return DiffusionSchedule(betas=betas, alphas_cumprod=alphas_cumprod, infer_steps=infer_steps)


def _coefficients(sched: DiffusionSchedule, t: TimeStep, like: torch.Tensor) -> tuple[Any, Any]:
    """sqrt(alpha-bar_t) and sqrt(1 - alpha-bar_t), broadcastable against ``like``."""
    if isinstance(t, torch.Tensor) and t.ndim > 0:
        steps = t.detach().cpu().numpy().astype(np.int64)
        if steps.min() < 0 or steps.max() > sched.t_train:
            raise OutOfRange(f"Time steps outside [0, {sched.t_train}]")
        abar = torch.as_tensor(sched.alphas_cumprod[steps], dtype=like.dtype, device=like.device)
        shape = (-1,) + (1,) * (like.ndim - 1)
        return abar.sqrt().view(shape), (1.0 - abar).sqrt().view(shape)
    abar_t = sched.alpha_bar(int(t))
    return math.sqrt(abar_t), math.sqrt(1.0 - abar_t)


def forward_noise(h0: torch.Tensor, t: TimeStep, eps: torch.Tensor, sched: DiffusionSchedule) -> torch.Tensor:
    """
    Noise a clean signal: H_t = sqrt(abar_t) * H_0 + sqrt(1 - abar_t) * eps.

    Args:
        h0: Clean signal (9, N) or batch (B, 9, N)
        t: Step in [1, T]; a (B,) tensor gives one step per batch element
        eps: Noise with the shape of h0

    Raises:
        OutOfRange: If any step is outside [1, T]
    """
    low = int(t.min()) if isinstance(t, torch.Tensor) else int(t)
    if low < 1:
        raise OutOfRange(f"Forward noising needs t >= 1, got {low}")
    signal, noise = _coefficients(sched, t, h0)
    return signal * h0 + noise * eps


def _check_grid_step(t: int, sched: DiffusionSchedule) -> None:
    if t != 0 and t not in sched.infer_steps:
        raise OutOfRange(f"Time step {t} is not on the inference grid")


def ddim_step(
    h: torch.Tensor, t_from: int, t_to: int, eps_hat: torch.Tensor, sched: DiffusionSchedule
) -> torch.Tensor:
    """
    One deterministic DDIM move between two grid points.

    ``t_to < t_from`` denoises; ``t_to > t_from`` runs the same update backward (encoding).

    Raises:
        OutOfRange: If a step is off the grid or both steps are equal
    """
    if t_from == t_to:
        raise OutOfRange(f"ddim_step needs distinct steps, got {t_from} twice")
    _check_grid_step(t_from, sched)
    _check_grid_step(t_to, sched)

    a_from = sched.alpha_bar(t_from)
    a_to = sched.alpha_bar(t_to)
    x0 = (h - math.sqrt(1.0 - a_from) * eps_hat) / math.sqrt(a_from)
    return math.sqrt(a_to) * x0 + math.sqrt(1.0 - a_to) * eps_hat


@torch.no_grad()
def decode(e_sto: torch.Tensor, e_sem: torch.Tensor, model: NoisePredictor, sched: DiffusionSchedule) -> torch.Tensor:
    """Denoise a stochastic embedding from T down to 0, one network call per grid step."""
    grid = sched.grid()
    h = e_sto
    for i in range(len(grid) - 1, 0, -1):
        eps_hat = model.predict_noise(h, grid[i], e_sem)
        h = ddim_step(h, grid[i], grid[i - 1], eps_hat, sched)
    return h


@torch.no_grad()
def encode_stochastic(
    h0: torch.Tensor, e_sem: torch.Tensor, model: NoisePredictor, sched: DiffusionSchedule
) -> torch.Tensor:
    """Run the denoising update backward from 0 up to T; the noise is estimated at the lower step."""
    grid = sched.grid()
    h = h0
    for i in range(len(grid) - 1):
        eps_hat = model.predict_noise(h, grid[i], e_sem)
        h = ddim_step(h, grid[i], grid[i + 1], eps_hat, sched)
    return h
