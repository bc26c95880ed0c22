"""Losses, the optimisation loop and the reconstruction pipeline."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import torch
from torch import nn

from handheadkit.core.config import ModelConfig, TrainConfig
from handheadkit.core.diffusion import DiffusionSchedule, decode, encode_stochastic, forward_noise
from handheadkit.core.errors import BadConfig, EmptyDataset
from handheadkit.core.models import LossRecord, Sample
from handheadkit.networks.autoencoder import (
    HandHeadAutoencoder,
    Model,
    build_model,
    model_config_of,
    renormalize_heads,
    scale_signal,
    unscale_signal,
)
from handheadkit.networks.baselines import VAEBaseline
from handheadkit.training.data import make_loader, samples_to_tensors

logger = logging.getLogger(__name__)

EpochCallback = Callable[[int, float], None]


@dataclass
class LossTerms:
    """
    Batch-averaged loss terms.

    For VAE baselines ``l_noise`` holds the reconstruction term and ``l_forecast`` the KL term.
    """

    total: torch.Tensor
    l_noise: torch.Tensor
    l_forecast: torch.Tensor


@dataclass
class TrainResult:
    """Trained model and its per-step loss log."""

    model: Model
    log: list[LossRecord] = field(default_factory=list)

    def epoch_means(self) -> list[float]:
        """Mean total loss per epoch, in epoch order."""
        totals: dict[int, list[float]] = {}
        for record in self.log:
            totals.setdefault(record.epoch, []).append(record.total)
        return [sum(v) / len(v) for _, v in sorted(totals.items())]


def compute_loss(
    inputs: torch.Tensor,
    futures: torch.Tensor,
    model: Model,
    generator: Optional[torch.Generator] = None,
    detach_semantic: bool = False,
) -> LossTerms:
    """
    Training loss of one batch.

    For the diffusion autoencoder every sample draws t from {1..T} and standard normal noise;
    L_noise is the summed squared noise error divided by N and L_forecast the summed squared
    forecast error over the 9 x dn layout divided by dn. The total is
    L_noise + forecast_weight * L_forecast, averaged over the batch.

    Args:
        inputs: (B, 9, N) clean windows in metres
        futures: (B, 9, dn) following frames in metres
        model: Autoencoder or VAE baseline
        generator: Source of the time steps and noise
        detach_semantic: Feed the UNet a detached E_sem (wiring checks)
    """
    config = model_config_of(model)
    h0 = scale_signal(inputs, config.signal_scale)

    if isinstance(model, VAEBaseline):
        terms = model.loss(h0, generator)
        return LossTerms(total=terms.total, l_noise=terms.recon, l_forecast=terms.kl)

    batch, _, n = h0.shape
    e_sem, features = model.encode_semantic(h0)
    t = torch.randint(1, config.t_train + 1, (batch,), generator=generator, device=h0.device)
    eps = torch.randn(h0.shape, generator=generator, dtype=h0.dtype, device=h0.device)
    h_t = forward_noise(h0, t, eps, model.schedule)

    eps_hat = model.predict_noise(h_t, t, e_sem.detach() if detach_semantic else e_sem)
    l_noise = ((eps_hat - eps) ** 2).sum(dim=(1, 2)) / n

    dn = futures.shape[2]
    if dn > 0:
        predicted = model.forecast(features).as_signal()
        target = scale_signal(futures, config.signal_scale)
        l_forecast = ((predicted - target) ** 2).sum(dim=(1, 2)) / dn
    else:
        l_forecast = torch.zeros_like(l_noise)

    total = l_noise + config.forecast_weight * l_forecast
    return LossTerms(total=total.mean(), l_noise=l_noise.mean(), l_forecast=l_forecast.mean())


def _check_samples(samples: Sequence[Sample], config: ModelConfig) -> None:
    if not samples:
        raise EmptyDataset("Training needs at least one sample")
    first = samples[0]
    if len(first.input) != config.n or len(first.future) != config.dn:
        raise BadConfig(
            f"Samples have n={len(first.input)}, dn={len(first.future)} but the model expects "
            f"n={config.n}, dn={config.dn}"
        )


def train(
    samples: Sequence[Sample],
    model_config: ModelConfig,
    train_config: TrainConfig,
    model: Optional[Model] = None,
    on_epoch: Optional[EpochCallback] = None,
) -> TrainResult:
    """
    Train a model end to end with Adam.

    Initialisation, shuffling, time steps and noise all derive from ``train_config.seed``, so two
    single-process runs with the same seed produce identical logs.

    Args:
        samples: Training windows
        model_config: Architecture of the model to build (ignored when ``model`` is given)
        train_config: Optimisation settings
        model: Continue training this model instead of building a fresh one
        on_epoch: Called with (epoch, mean total loss) after every epoch

    Returns:
        TrainResult with the trained model and the per-step log

    Raises:
        EmptyDataset: If ``samples`` is empty
    """
    _check_samples(samples, model_config)
    torch.manual_seed(train_config.seed)
    if model is None:
        model = build_model(model_config)

    inputs, futures = samples_to_tensors(samples)
    loader = make_loader(
        inputs, futures, train_config.batch_size, shuffle=True, seed=train_config.seed, workers=train_config.workers
    )
    noise_generator = torch.Generator().manual_seed(train_config.seed + 1)
    optimizer = torch.optim.Adam(model.parameters(), lr=train_config.learning_rate, betas=(0.9, 0.999), eps=1e-8)
    scheduler = None
    if train_config.lr_schedule == "cosine":
        scheduler = torch.optim.lr_scheduler.CosineAnnealingLR(optimizer, T_max=train_config.epochs)

    logger.info(
        f"Training {model_config.variant.value} on {len(samples)} samples for {train_config.epochs} epoch(s) "
        f"(lr={train_config.learning_rate}, batch={train_config.batch_size}, seed={train_config.seed})"
    )
    result = TrainResult(model=model)
    step = 0
    for epoch in range(1, train_config.epochs + 1):
        model.train()
        epoch_totals = []
        for batch_inputs, batch_futures in loader:
            terms = compute_loss(batch_inputs, batch_futures, model, noise_generator)
            optimizer.zero_grad()
            terms.total.backward()
            if train_config.grad_clip is not None:
                nn.utils.clip_grad_norm_(model.parameters(), train_config.grad_clip)
            optimizer.step()

            step += 1
            record = LossRecord(
                epoch=epoch,
                step=step,
                total=float(terms.total.detach()),
                l_noise=float(terms.l_noise.detach()),
                l_forecast=float(terms.l_forecast.detach()),
            )
            result.log.append(record)
            epoch_totals.append(record.total)

        if scheduler is not None:
            scheduler.step()
        epoch_log = result.log[-len(epoch_totals) :]
        mean_total = sum(epoch_totals) / len(epoch_totals)
        mean_noise = sum(r.l_noise for r in epoch_log) / len(epoch_log)
        mean_forecast = sum(r.l_forecast for r in epoch_log) / len(epoch_log)
        logger.info(
            f"epoch {epoch}/{train_config.epochs}: total {mean_total:.6f} "
            f"noise {mean_noise:.6f} forecast {mean_forecast:.6f}"
        )
        if on_epoch is not None:
            on_epoch(epoch, mean_total)

    model.eval()
    return result


@torch.no_grad()
def reconstruct(
    h0: torch.Tensor,
    model: Model,
    sched: Optional[DiffusionSchedule] = None,
    ablate_semantic: bool = False,
    ablate_stochastic: bool = False,
    generator: Optional[torch.Generator] = None,
) -> torch.Tensor:
    """
    Reconstruct a batch through the model.

    The autoencoder path is encode_semantic, encode_stochastic, then decode. VAE baselines
    decode their posterior mean. Output is in metres with unit head columns.

    Args:
        h0: (B, 9, N) windows in metres
        model: Trained model (switched to eval mode)
        sched: Inference schedule (the model's own when None)
        ablate_semantic: Replace E_sem with standard Gaussian noise
        ablate_stochastic: Replace E_sto with standard Gaussian noise
        generator: Noise source for the ablations

    Raises:
        BadConfig: If an ablation is requested for a VAE baseline
    """
    config = model_config_of(model)
    model.eval()
    x = scale_signal(h0, config.signal_scale)

    if isinstance(model, VAEBaseline):
        if ablate_semantic or ablate_stochastic:
            raise BadConfig("Embedding ablations apply to the diffusion autoencoder only")
        out = model(x)
    else:
        out = _decode_autoencoder(x, model, sched or model.schedule, ablate_semantic, ablate_stochastic, generator)
    return renormalize_heads(unscale_signal(out, config.signal_scale))


def _decode_autoencoder(
    x: torch.Tensor,
    model: HandHeadAutoencoder,
    sched: DiffusionSchedule,
    ablate_semantic: bool,
    ablate_stochastic: bool,
    generator: Optional[torch.Generator],
) -> torch.Tensor:
    e_sem, _ = model.encode_semantic(x)
    if ablate_semantic:
        e_sem = torch.randn(e_sem.shape, generator=generator, dtype=e_sem.dtype, device=e_sem.device)
    if ablate_stochastic:
        e_sto = torch.randn(x.shape, generator=generator, dtype=x.dtype, device=x.device)
    else:
        e_sto = encode_stochastic(x, e_sem, model, sched)
    return decode(e_sto, e_sem, model, sched)


@torch.no_grad()
def encode(
    h0: torch.Tensor, model: HandHeadAutoencoder, sched: Optional[DiffusionSchedule] = None
) -> tuple[torch.Tensor, torch.Tensor]:
    """Return (E_sem, E_sto) of a batch in metres."""
    model.eval()
    x = scale_signal(h0, model.config.signal_scale)
    e_sem, _ = model.encode_semantic(x)
    return e_sem, encode_stochastic(x, e_sem, model, sched or model.schedule)


@torch.no_grad()
def decode_to_metres(
    e_sto: torch.Tensor, e_sem: torch.Tensor, model: HandHeadAutoencoder, sched: Optional[DiffusionSchedule] = None
) -> torch.Tensor:
    """Decode embeddings to a (B, 9, N) signal in metres with unit head columns."""
    model.eval()
    out = decode(e_sto, e_sem, model, sched or model.schedule)
    return renormalize_heads(unscale_signal(out, model.config.signal_scale))


@torch.no_grad()
def semantic_embeddings(inputs: torch.Tensor, model: Model, batch_size: int = 256) -> torch.Tensor:
    """
    Semantic embeddings of many windows, computed in eval mode.

    VAE baselines contribute their posterior means.
    """
    config = model_config_of(model)
    model.eval()
    chunks = []
    for start in range(0, inputs.shape[0], batch_size):
        x = scale_signal(inputs[start : start + batch_size], config.signal_scale)
        if isinstance(model, VAEBaseline):
            chunks.append(model.encode(x)[0])
        else:
            chunks.append(model.encode_semantic(x)[0])
    return torch.cat(chunks, dim=0)
