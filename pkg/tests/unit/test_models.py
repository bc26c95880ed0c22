"""Unit tests for core data models."""

import numpy as np
import pytest

from handheadkit.core.models import (
    BaselineKind,
    ClusterResult,
    EvalReport,
    HandHeadFrame,
    HandHeadSequence,
    ModelVariant,
    RecordingMeta,
    SampleErrors,
    WorldFrame,
)


class TestFrames:
    """Test frame validation."""

    def test_hand_head_frame_vector(self):
        frame = HandHeadFrame(ha=(1, 2, 3, 4, 5, 6), he=(0, 0, 1), t=3)
        np.testing.assert_array_equal(frame.to_vector(), [1, 2, 3, 4, 5, 6, 0, 0, 1])

    def test_non_unit_head_direction_rejected(self):
        with pytest.raises(ValueError, match="unit vector"):
            HandHeadFrame(ha=(0,) * 6, he=(0, 0, 2))

    def test_wrong_lengths_rejected(self):
        with pytest.raises(ValueError):
            HandHeadFrame(ha=(0,) * 5, he=(0, 0, 1))
        with pytest.raises(ValueError):
            WorldFrame(t=0, head_pos=(0, 0), head_dir=(0, 0, 1), lhand_pos=(0, 0, 0), rhand_pos=(0, 0, 0))


class TestHandHeadSequence:
    """Test the (9, N) array view of sequences."""

    def test_array_round_trip(self):
        rng = np.random.default_rng(0)
        array = rng.normal(size=(9, 5))
        array[6:9] /= np.linalg.norm(array[6:9], axis=0)

        sequence = HandHeadSequence.from_array(array, fps=25.0, start=10)

        assert len(sequence) == 5
        assert sequence.frames[0].t == 10
        np.testing.assert_allclose(sequence.to_array(), array)

    def test_empty_sequence(self):
        assert HandHeadSequence(frames=[]).to_array().shape == (9, 0)

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            HandHeadSequence.from_array(np.zeros((6, 4)))


class TestModelVariant:
    """Test variant properties."""

    def test_vae_variants(self):
        assert ModelVariant.VAE_LSTM.is_vae
        assert not ModelVariant.OURS.is_vae
        assert not ModelVariant.OURS_GRU_ENC.is_vae

    def test_baseline_kind(self):
        assert ModelVariant.OURS.baseline_kind is None
        assert ModelVariant.VAE_1DCNN.baseline_kind is BaselineKind.CNN
        assert ModelVariant.OURS_MLP_ENC.baseline_kind is BaselineKind.MLP
        assert ModelVariant.VAE_GRU.baseline_kind is BaselineKind.GRU


def test_recording_meta_labels_skip_empty():
    """Test that only non-empty labels are reported."""
    assert RecordingMeta(user="u1").labels() == {"user": "u1"}
    assert RecordingMeta(user="u1", activity="reach").labels() == {"user": "u1", "activity": "reach"}


def test_eval_report_round_trip():
    """Test EvalReport dictionary serialisation."""
    report = EvalReport(
        per_sample=[SampleErrors(1.5, 2.0), SampleErrors(0.5, 1.0)],
        aggregates={"n_samples": 2.0, "mpjpe_cm_mean": 1.0},
        cdf={"mpjpe_cm": [(0.0, 0.0), (1.5, 1.0)]},
        metadata={"seed": 3, "ablate_esem": False},
    )

    restored = EvalReport.from_dict(report.to_dict())

    assert restored == report


def test_cluster_result_sizes():
    """Test sizes and noise count."""
    result = ClusterResult(labels=[1, 0, 1, -1, -1], n_clusters=2)
    assert result.sizes() == {0: 1, 1: 2}
    assert result.n_noise == 2
