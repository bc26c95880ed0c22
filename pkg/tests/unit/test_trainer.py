"""Unit tests for the losses, the training loop and reconstruction."""

from dataclasses import replace

import pytest
import torch

from handheadkit.core.config import ModelConfig, TrainConfig
from handheadkit.core.errors import BadConfig, EmptyDataset
from handheadkit.core.models import ModelVariant
from handheadkit.core.signals import window
from handheadkit.networks.autoencoder import build_model
from handheadkit.training.data import samples_to_tensors
from handheadkit.training.trainer import compute_loss, reconstruct, semantic_embeddings, train


@pytest.fixture
def samples(relative_recording, tiny_config):
    return window(relative_recording, tiny_config.n, tiny_config.dn, stride=4)


@pytest.fixture
def fast_train() -> TrainConfig:
    return TrainConfig(epochs=3, learning_rate=1e-2, batch_size=8, seed=0)


class TestComputeLoss:
    """Test the training objective."""

    def test_zero_predictor_loss_is_noise_energy(self, tiny_config, signal_batch):
        model = build_model(tiny_config, seed=0)
        futures = torch.zeros(4, 9, tiny_config.dn)

        terms = compute_loss(signal_batch, futures, model, torch.Generator().manual_seed(5))

        generator = torch.Generator().manual_seed(5)
        torch.randint(1, tiny_config.t_train + 1, (4,), generator=generator)
        eps = torch.randn(signal_batch.shape, generator=generator)
        expected = (eps**2).sum(dim=(1, 2)).mean() / tiny_config.n
        torch.testing.assert_close(terms.l_noise, expected)

    def test_total_combines_terms(self, tiny_config, signal_batch):
        config = replace(tiny_config, forecast_weight=0.5)
        model = build_model(config, seed=0)
        terms = compute_loss(signal_batch, torch.randn(4, 9, config.dn), model, torch.Generator().manual_seed(1))
        torch.testing.assert_close(terms.total, terms.l_noise + 0.5 * terms.l_forecast)

    def test_no_forecast_without_horizon(self, tiny_config, signal_batch):
        config = replace(tiny_config, dn=0)
        model = build_model(config, seed=0)
        terms = compute_loss(signal_batch, torch.zeros(4, 9, 0), model, torch.Generator().manual_seed(1))
        assert float(terms.l_forecast) == 0.0

    def test_vae_terms(self, tiny_config, signal_batch):
        config = replace(tiny_config, variant=ModelVariant.VAE_MLP, latent_dim=4, mlp_hidden=16)
        model = build_model(config, seed=0)
        terms = compute_loss(signal_batch, torch.zeros(4, 9, config.dn), model, torch.Generator().manual_seed(1))
        torch.testing.assert_close(terms.total, terms.l_noise + config.kl_weight * terms.l_forecast)

    def test_losses_equivariant_under_signal_scale(self, tiny_config, signal_batch):
        s = 2.5
        config = replace(tiny_config, zero_init=False)
        futures = torch.randn(4, 9, config.dn, generator=torch.Generator().manual_seed(3))
        futures[:, 6:9] = futures[:, 6:9] / futures[:, 6:9].norm(dim=1, keepdim=True)
        scaled_inputs, scaled_futures = signal_batch.clone(), futures.clone()
        scaled_inputs[:, :6] *= s
        scaled_futures[:, :6] *= s

        plain = compute_loss(signal_batch, futures, build_model(config, seed=0), torch.Generator().manual_seed(4))
        scaled = compute_loss(
            scaled_inputs,
            scaled_futures,
            build_model(replace(config, signal_scale=s), seed=0),
            torch.Generator().manual_seed(4),
        )

        torch.testing.assert_close(scaled.l_noise, plain.l_noise)
        torch.testing.assert_close(scaled.l_forecast, plain.l_forecast)
        torch.testing.assert_close(scaled.total, plain.total)

    def test_semantic_gradient_flows_through_unet(self, tiny_config, signal_batch):
        config = replace(tiny_config, forecast_weight=0.0, zero_init=False)
        model = build_model(config, seed=0)
        terms = compute_loss(signal_batch, torch.zeros(4, 9, config.dn), model, torch.Generator().manual_seed(1))
        terms.total.backward()
        grads = [p.grad for p in model.encoder.parameters() if p.grad is not None]
        assert any(float(g.abs().sum()) > 0 for g in grads)

    def test_detached_semantic_blocks_encoder_gradient(self, tiny_config, signal_batch):
        config = replace(tiny_config, forecast_weight=0.0, zero_init=False)
        model = build_model(config, seed=0)
        terms = compute_loss(
            signal_batch, torch.zeros(4, 9, config.dn), model, torch.Generator().manual_seed(1), detach_semantic=True
        )
        terms.total.backward()
        assert all(p.grad is None or float(p.grad.abs().sum()) == 0 for p in model.encoder.parameters())


class TestTrain:
    """Test the optimisation loop."""

    def test_log_has_one_record_per_step(self, samples, tiny_config, fast_train):
        result = train(samples, tiny_config, fast_train)
        steps_per_epoch = -(-len(samples) // fast_train.batch_size)
        assert len(result.log) == fast_train.epochs * steps_per_epoch
        assert [r.step for r in result.log] == list(range(1, len(result.log) + 1))
        assert len(result.epoch_means()) == fast_train.epochs

    def test_same_seed_same_log(self, samples, tiny_config, fast_train):
        first = train(samples, tiny_config, fast_train)
        second = train(samples, tiny_config, fast_train)
        assert [r.total for r in first.log] == [r.total for r in second.log]

    def test_different_seed_different_log(self, samples, tiny_config, fast_train):
        first = train(samples, tiny_config, fast_train)
        second = train(samples, tiny_config, replace(fast_train, seed=1))
        assert [r.total for r in first.log] != [r.total for r in second.log]

    def test_forecast_loss_decreases(self, samples, tiny_config):
        result = train(samples, tiny_config, TrainConfig(epochs=30, learning_rate=1e-2, batch_size=8, seed=0))
        first = [r.l_forecast for r in result.log if r.epoch == 1]
        last = [r.l_forecast for r in result.log if r.epoch == 30]
        assert sum(last) / len(last) < 0.5 * sum(first) / len(first)

    def test_vae_loss_decreases(self, samples, tiny_config):
        config = replace(tiny_config, variant=ModelVariant.VAE_MLP, latent_dim=4, mlp_hidden=16)
        result = train(samples, config, TrainConfig(epochs=30, learning_rate=1e-2, batch_size=8, seed=0))
        means = result.epoch_means()
        assert means[-1] < means[0]

    def test_epoch_callback(self, samples, tiny_config, fast_train):
        seen = []
        train(samples, tiny_config, fast_train, on_epoch=lambda epoch, loss: seen.append(epoch))
        assert seen == [1, 2, 3]

    def test_empty_dataset(self, tiny_config, fast_train):
        with pytest.raises(EmptyDataset):
            train([], tiny_config, fast_train)

    def test_window_mismatch(self, samples, fast_train):
        with pytest.raises(BadConfig):
            train(samples, ModelConfig(n=12, dn=2, gn_groups=2, unet_channels=8), fast_train)


class TestReconstruct:
    """Test the reconstruction pipeline."""

    def test_zero_predictor_is_identity(self, tiny_config, signal_batch):
        model = build_model(tiny_config, seed=0).double()
        h0 = signal_batch.double()
        h0[:, 6:9] = h0[:, 6:9] / h0[:, 6:9].norm(dim=1, keepdim=True)
        torch.testing.assert_close(reconstruct(h0, model), h0, rtol=0, atol=1e-9)

    def test_head_columns_are_unit(self, tiny_config, signal_batch):
        model = build_model(replace(tiny_config, zero_init=False), seed=0)
        out = reconstruct(signal_batch, model)
        torch.testing.assert_close(out[:, 6:9].norm(dim=1), torch.ones(4, tiny_config.n))

    def test_ablation_is_seeded(self, tiny_config, signal_batch):
        model = build_model(replace(tiny_config, zero_init=False), seed=0)
        first = reconstruct(signal_batch, model, ablate_stochastic=True, generator=torch.Generator().manual_seed(2))
        second = reconstruct(signal_batch, model, ablate_stochastic=True, generator=torch.Generator().manual_seed(2))
        assert torch.equal(first, second)

    def test_vae_rejects_ablation(self, tiny_config, signal_batch):
        model = build_model(replace(tiny_config, variant=ModelVariant.VAE_GRU, latent_dim=4), seed=0)
        with pytest.raises(BadConfig):
            reconstruct(signal_batch, model, ablate_semantic=True)


def test_semantic_embeddings_batches(tiny_config, samples):
    """Test that chunked embedding matches a single pass."""
    model = build_model(tiny_config, seed=0)
    inputs, _ = samples_to_tensors(samples)
    chunked = semantic_embeddings(inputs, model, batch_size=3)
    whole = semantic_embeddings(inputs, model, batch_size=len(samples))
    assert chunked.shape == (len(samples), tiny_config.semantic_dim)
    torch.testing.assert_close(chunked, whole)
