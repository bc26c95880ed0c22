"""Central finite-difference checks of analytic gradients."""

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import torch
from torch import nn

LossFn = Callable[[], torch.Tensor]


@dataclass
class GradientCheck:
    """Analytic vs numeric directional derivative of one parameter tensor."""

    name: str
    analytic: float
    numeric: float

    @property
    def relative_error(self) -> float:
        scale = max(abs(self.analytic), abs(self.numeric))
        if scale < 1e-10:
            return 0.0
        return abs(self.analytic - self.numeric) / scale


def randomize_parameters(module: nn.Module, generator: torch.Generator, scale: float = 0.5) -> None:
    """Overwrite every parameter with Gaussian values (zero-initialised layers included)."""
    with torch.no_grad():
        for p in module.parameters():
            p.copy_(scale * torch.randn(p.shape, generator=generator, dtype=p.dtype))


def check_gradients(
    loss_fn: LossFn,
    parameters: Iterable[tuple[str, nn.Parameter]],
    eps: float = 1e-4,
    generator: Optional[torch.Generator] = None,
) -> list[GradientCheck]:
    """
    Compare autograd against central differences along a random unit direction per tensor.

    ``loss_fn`` must be deterministic: it is evaluated once for the analytic gradient and twice
    per parameter tensor for the numeric one.
    """
    named = [(name, p) for name, p in parameters if p.requires_grad]
    loss = loss_fn()
    grads = torch.autograd.grad(loss, [p for _, p in named], allow_unused=True)

    checks = []
    for (name, p), grad in zip(named, grads):
        direction = torch.randn(p.shape, generator=generator, dtype=p.dtype)
        direction /= direction.norm().clamp_min(1e-12)
        analytic = 0.0 if grad is None else float((grad * direction).sum())
        with torch.no_grad():
            p.add_(eps * direction)
            plus = float(loss_fn())
            p.sub_(2 * eps * direction)
            minus = float(loss_fn())
            p.add_(eps * direction)
        checks.append(GradientCheck(name=name, analytic=analytic, numeric=(plus - minus) / (2 * eps)))
    return checks


def worst(checks: Iterable[GradientCheck]) -> GradientCheck:
    """The check with the largest relative error."""
    return max(checks, key=lambda c: c.relative_error)
