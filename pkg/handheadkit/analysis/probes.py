"""Linear probes on frozen semantic embeddings."""

import logging
from typing import Sequence, Union

import numpy as np
import torch
from sklearn.metrics import confusion_matrix
from torch import nn
from torch.utils.data import DataLoader, TensorDataset

from handheadkit.core.config import ProbeConfig
from handheadkit.core.errors import EmptyInput, LengthMismatch, SingleClass, UnknownClass
from handheadkit.core.models import ProbeReport, Sample

logger = logging.getLogger(__name__)

EmbeddingsLike = Union[np.ndarray, torch.Tensor]


class LinearProbe(nn.Module):
    """A single linear layer over E_sem; softmax is folded into the cross-entropy loss."""

    def __init__(self, in_features: int, class_names: Sequence[str]):
        super().__init__()
        self.class_names = list(class_names)
        self.linear = nn.Linear(in_features, len(self.class_names))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.linear(x)

    def class_indices(self, labels: Sequence[str]) -> torch.Tensor:
        """Map label strings to class indices."""
        index = {name: i for i, name in enumerate(self.class_names)}
        unknown = sorted(set(labels) - set(index))
        if unknown:
            raise UnknownClass(f"Labels not seen when fitting the probe: {', '.join(unknown)}")
        return torch.tensor([index[label] for label in labels], dtype=torch.long)

    @torch.no_grad()
    def predict(self, embeddings: EmbeddingsLike) -> torch.Tensor:
        """Argmax class index per embedding."""
        return self(_frozen(embeddings)).argmax(dim=1)


def _frozen(embeddings: EmbeddingsLike) -> torch.Tensor:
    # detached copy: no gradient can reach the encoder that produced the embeddings
    if isinstance(embeddings, torch.Tensor):
        return embeddings.detach().clone().to(torch.float32)
    return torch.as_tensor(np.asarray(embeddings), dtype=torch.float32)


def fit_probe(embeddings: EmbeddingsLike, labels: Sequence[str], config: ProbeConfig) -> LinearProbe:
    """
    Fit a linear classifier with cross-entropy and Adam.

    Initialisation and batch order derive from ``config.seed``.

    Raises:
        SingleClass: If the labels contain fewer than two classes
    """
    x = _frozen(embeddings)
    if x.shape[0] != len(labels):
        raise LengthMismatch(f"{len(labels)} labels for {x.shape[0]} embeddings")
    class_names = sorted(set(labels))
    if len(class_names) < 2:
        raise SingleClass(f"A probe needs at least two classes, got {class_names}")

    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(config.seed)
        probe = LinearProbe(x.shape[1], class_names)
    y = probe.class_indices(labels)

    loader = DataLoader(
        TensorDataset(x, y),
        batch_size=config.batch_size,
        shuffle=True,
        generator=torch.Generator().manual_seed(config.seed),
    )
    optimizer = torch.optim.Adam(probe.parameters(), lr=config.learning_rate)
    loss_fn = nn.CrossEntropyLoss()
    probe.train()
    for epoch in range(1, config.epochs + 1):
        for batch_x, batch_y in loader:
            optimizer.zero_grad()
            loss = loss_fn(probe(batch_x), batch_y)
            loss.backward()
            optimizer.step()
        if epoch == config.epochs:
            logger.debug(f"Probe over {len(class_names)} classes: final batch loss {float(loss):.4f}")
    probe.eval()
    return probe


def probe_accuracy(probe: LinearProbe, embeddings: EmbeddingsLike, labels: Sequence[str]) -> float:
    """
    Argmax accuracy in [0, 1].

    Raises:
        UnknownClass: If a label is outside the probe's classes
    """
    y = probe.class_indices(labels)
    if y.numel() == 0:
        raise EmptyInput("No embeddings to score")
    return float((probe.predict(embeddings) == y).double().mean())


def probe_report(task: str, probe: LinearProbe, embeddings: EmbeddingsLike, labels: Sequence[str]) -> ProbeReport:
    """Accuracy, per-class accuracy and confusion matrix (rows true, columns predicted)."""
    y = probe.class_indices(labels).numpy()
    predicted = probe.predict(embeddings).numpy()
    k = len(probe.class_names)
    matrix = confusion_matrix(y, predicted, labels=list(range(k)))
    per_class = {
        name: float(matrix[i, i] / matrix[i].sum()) for i, name in enumerate(probe.class_names) if matrix[i].sum() > 0
    }
    return ProbeReport(
        task=task,
        accuracy=float(np.trace(matrix) / matrix.sum()),
        chance=1.0 / k,
        per_class=per_class,
        confusion=matrix.astype(int).tolist(),
        class_names=list(probe.class_names),
    )


def split_halves(samples: Sequence[Sample]) -> tuple[list[Sample], list[Sample]]:
    """
    Split every recording's windows into its first and second half.

    Windows keep their order; a recording with an odd count puts the extra window in the first
    half.
    """
    by_source: dict[str, list[Sample]] = {}
    for sample in samples:
        by_source.setdefault(sample.source, []).append(sample)

    first: list[Sample] = []
    second: list[Sample] = []
    for windows in by_source.values():
        ordered = sorted(windows, key=lambda s: s.start)
        cut = (len(ordered) + 1) // 2
        first.extend(ordered[:cut])
        second.extend(ordered[cut:])
    return first, second
