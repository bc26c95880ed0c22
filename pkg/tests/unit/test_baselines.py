"""Unit tests for the VAE baselines and swapped semantic encoders."""

import pytest
import torch

from handheadkit.core.errors import ShapeMismatch
from handheadkit.core.models import BaselineKind
from handheadkit.networks.baselines import BaselineSemanticEncoder, VAEBaseline, elbo_terms, gaussian_kl


@pytest.fixture(autouse=True)
def seeded():
    torch.manual_seed(0)


@pytest.mark.parametrize("kind", list(BaselineKind))
class TestVAEShapes:
    """Test every network family."""

    def test_posterior_shapes(self, kind, signal_batch):
        vae = VAEBaseline(kind, n=8, latent_dim=5, hidden=6, mlp_hidden=10)
        mu, logvar = vae.encode(signal_batch)
        assert mu.shape == (4, 5)
        assert logvar.shape == (4, 5)

    def test_decoder_shape(self, kind):
        vae = VAEBaseline(kind, n=8, latent_dim=5, hidden=6, mlp_hidden=10)
        assert vae.decode(torch.randn(3, 5)).shape == (3, 9, 8)

    def test_forward_decodes_mean(self, kind, signal_batch):
        vae = VAEBaseline(kind, n=8, latent_dim=5, hidden=6, mlp_hidden=10).eval()
        mu, _ = vae.encode(signal_batch)
        torch.testing.assert_close(vae(signal_batch), vae.decode(mu))

    def test_swapped_encoder_shapes(self, kind, signal_batch):
        encoder = BaselineSemanticEncoder(kind, n=8, channels=4, semantic_dim=8, hidden=6, mlp_hidden=10)
        e_sem, features = encoder(signal_batch)
        assert e_sem.shape == (4, 8)
        assert features.shape == (4, 4, 3, 2)


def test_mlp_encoder_with_zero_weights_outputs_bias(signal_batch):
    """Test that the posterior heads reduce to their biases when the trunk is silenced."""
    vae = VAEBaseline(BaselineKind.MLP, n=8, latent_dim=3, mlp_hidden=10)
    with torch.no_grad():
        for p in vae.encoder.trunk.parameters():
            p.zero_()
        vae.encoder.fc_mu.weight.zero_()
        vae.encoder.fc_mu.bias.copy_(torch.tensor([1.0, -2.0, 0.5]))
    mu, _ = vae.encode(signal_batch)
    torch.testing.assert_close(mu, torch.tensor([1.0, -2.0, 0.5]).expand(4, 3))


def test_decode_rejects_wrong_latent():
    with pytest.raises(ShapeMismatch):
        VAEBaseline(BaselineKind.GRU, n=8, latent_dim=5).decode(torch.randn(2, 4))


def test_encode_rejects_wrong_window():
    with pytest.raises(ShapeMismatch):
        VAEBaseline(BaselineKind.LSTM, n=8).encode(torch.randn(2, 9, 10))


class TestELBO:
    """Test the loss terms."""

    def test_standard_posterior_has_zero_kl(self):
        kl = gaussian_kl(torch.zeros(2, 4), torch.zeros(2, 4))
        assert torch.equal(kl, torch.zeros(2))

    def test_kl_oracle(self):
        # mu = 1, unit variance: 0.5 per dimension, averaged over dimensions
        kl = gaussian_kl(torch.ones(2, 4), torch.zeros(2, 4))
        torch.testing.assert_close(kl, torch.full((2,), 0.5))

    def test_perfect_reconstruction(self):
        target = torch.randn(2, 9, 8)
        loss = elbo_terms(target, target.clone(), torch.zeros(2, 4), torch.zeros(2, 4), kl_weight=1e-3)
        assert float(loss.recon) == 0.0
        assert float(loss.total) == 0.0

    def test_total_oracle(self):
        target = torch.zeros(1, 9, 4)
        recon = torch.full((1, 9, 4), 2.0)
        loss = elbo_terms(target, recon, torch.ones(1, 4), torch.zeros(1, 4), kl_weight=0.1)
        assert float(loss.recon) == pytest.approx(4.0)
        assert float(loss.kl) == pytest.approx(0.5)
        assert float(loss.total) == pytest.approx(4.05)

    def test_reparameterised_loss_is_seeded(self, signal_batch):
        vae = VAEBaseline(BaselineKind.CNN, n=8, latent_dim=5, hidden=6)
        first = vae.loss(signal_batch, torch.Generator().manual_seed(3)).total
        second = vae.loss(signal_batch, torch.Generator().manual_seed(3)).total
        assert torch.equal(first, second)
