"""Unit tests for the hand-head signal model."""

import numpy as np
import pytest

from handheadkit.core.config import SynthConfig
from handheadkit.core.errors import BadConfig, DegenerateDirection, SchemaError, UnknownFamily
from handheadkit.core.models import Coords, MotionFamily, Recording, RecordingMeta, WorldFrame
from handheadkit.core.signals import (
    TooShortWarning,
    check_sanity,
    family_trajectory,
    normalize_direction,
    synth_generate,
    to_relative,
    to_relative_recording,
    window,
)


def _world(head_pos, lhand, rhand, head_dir, t=0):
    return WorldFrame(t=t, head_pos=head_pos, head_dir=head_dir, lhand_pos=lhand, rhand_pos=rhand)


class TestToRelative:
    """Test world-to-relative conversion."""

    def test_origin_at_head_and_normalisation(self):
        frame = to_relative(_world((0, 0, 0), (0.3, 0, 0), (-0.3, 0, 0), (0, 0, 2)))
        assert frame.ha == (0.3, 0.0, 0.0, -0.3, 0.0, 0.0)
        assert frame.he == (0.0, 0.0, 1.0)

    def test_coincident_points(self):
        frame = to_relative(_world((1, 1, 1), (1, 1, 1), (1, 1, 1), (1, 0, 0)))
        assert frame.ha == (0.0,) * 6
        assert frame.he == (1.0, 0.0, 0.0)

    def test_hand_computed_example(self):
        frame = to_relative(_world((0.5, 1.6, 0.2), (0.8, 1.2, 0.2), (0.1, 1.3, 0.5), (0.6, 0, 0.8)))
        np.testing.assert_allclose(frame.ha, (0.3, -0.4, 0.0, -0.4, -0.3, 0.3), atol=1e-12)
        np.testing.assert_allclose(frame.he, (0.6, 0.0, 0.8), atol=1e-12)

    def test_translation_invariance(self):
        base = to_relative(_world((0.1, 1.5, 0.0), (0.4, 1.0, 0.3), (-0.2, 1.1, 0.2), (0, 0, 1)))
        offset = np.array([2.0, -1.0, 3.0])
        moved = to_relative(
            _world(
                tuple(np.array((0.1, 1.5, 0.0)) + offset),
                tuple(np.array((0.4, 1.0, 0.3)) + offset),
                tuple(np.array((-0.2, 1.1, 0.2)) + offset),
                (0, 0, 1),
            )
        )
        np.testing.assert_allclose(moved.ha, base.ha, atol=1e-12)

    def test_degenerate_head_direction(self):
        with pytest.raises(DegenerateDirection):
            to_relative(_world((0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 1e-9)))

    def test_normalisation_idempotent(self):
        once = normalize_direction((0.3, 0.4, 1.2))
        assert normalize_direction(once) == once

    def test_recording_conversion(self):
        meta = RecordingMeta(user="u1", activity="reach", coords=Coords.WORLD)
        world = Recording(meta=meta, frames=[_world((0, 1, 0), (0, 1, 1), (0, 0, 1), (0, 0, 1), t=i) for i in range(3)])

        relative = to_relative_recording(world)

        assert relative.meta.coords is Coords.RELATIVE
        assert relative.meta.user == "u1"
        assert relative.frames[2].ha == (0.0, 0.0, 1.0, 0.0, -1.0, 1.0)

    def test_relative_recording_passes_through(self, relative_recording):
        assert to_relative_recording(relative_recording) is relative_recording


class TestWindow:
    """Test windowing into (input, future) samples."""

    def test_strided_starts(self, relative_recording):
        samples = window(relative_recording, n=40, dn=3, stride=20)
        assert [s.start for s in samples] == [0, 20, 40]

    def test_exact_fit(self, recording_factory):
        assert len(window(recording_factory(43), n=40, dn=3, stride=1)) == 1

    def test_too_short_warns(self, recording_factory):
        with pytest.warns(TooShortWarning):
            assert window(recording_factory(42), n=40, dn=3, stride=1) == []

    def test_contiguity(self, relative_recording):
        sample = window(relative_recording, n=40, dn=3, stride=20)[1]
        full = relative_recording.to_array()
        np.testing.assert_array_equal(sample.input.to_array(), full[:, 20:60])
        np.testing.assert_array_equal(sample.future.to_array(), full[:, 60:63])

    def test_labels_and_source_copied(self, recording_factory):
        sample = window(recording_factory(50, name="r7", user="u2", activity="reach"), n=40, dn=3, stride=5)[0]
        assert sample.labels == {"user": "u2", "activity": "reach"}
        assert sample.source == "r7"

    def test_zero_horizon(self, relative_recording):
        samples = window(relative_recording, n=40, dn=0, stride=30)
        assert len(samples) == 3
        assert len(samples[0].future) == 0

    def test_invalid_parameters(self, relative_recording):
        with pytest.raises(BadConfig):
            window(relative_recording, n=40, dn=3, stride=0)

    def test_world_recording_rejected(self):
        meta = RecordingMeta(coords=Coords.WORLD)
        world = Recording(meta=meta, frames=[_world((0, 0, 0), (0, 0, 0), (0, 0, 0), (0, 0, 1))])
        with pytest.raises(SchemaError):
            window(world, n=1, dn=0, stride=1)


class TestSanity:
    """Test the sanity-radius check."""

    def test_flags_without_clipping(self, recording_factory):
        recording = recording_factory(400)  # left hand x grows by 1 cm per frame

        flagged = check_sanity(recording, radius=2.995)

        assert flagged[0] == 300
        assert recording.frames[350].ha[0] == pytest.approx(3.5)

    def test_clean_recording(self, relative_recording):
        assert check_sanity(relative_recording) == []


class TestSynthGenerate:
    """Test the synthetic corpus generator."""

    def test_deterministic(self):
        config = SynthConfig(family=MotionFamily.IDLE, user="u0", n_frames=300)
        first = synth_generate(config, seed=7)
        second = synth_generate(config, seed=7)
        np.testing.assert_array_equal(first.to_array(), second.to_array())

    def test_seed_changes_output(self):
        config = SynthConfig(family=MotionFamily.IDLE, user="u0", n_frames=300)
        assert not np.array_equal(synth_generate(config, 1).to_array(), synth_generate(config, 2).to_array())

    def test_reach_amplitude(self):
        """Test the closed-form reach trajectory covers the configured amplitude."""
        config = SynthConfig(family=MotionFamily.REACH, user="u0", n_frames=300, amplitude=0.3)
        trajectory = family_trajectory(config)
        displacement = trajectory[:, 3:6].max(axis=0) - trajectory[:, 3:6].min(axis=0)
        assert displacement.max() >= 0.9 * 0.3

    @pytest.mark.parametrize("family", list(MotionFamily))
    def test_unit_head_directions(self, family):
        recording = synth_generate(SynthConfig(family=family, user="u1", n_frames=200), seed=3)
        norms = np.linalg.norm(recording.to_array()[6:9], axis=0)
        np.testing.assert_allclose(norms, 1.0, atol=1e-6)

    def test_header_labels(self):
        recording = synth_generate(SynthConfig(family=MotionFamily.BIMANUAL, user="u2", n_frames=10), seed=0)
        assert recording.meta.labels() == {"user": "u2", "activity": "bimanual"}
        assert recording.name == "bimanual_u2"
        assert len(recording) == 10

    def test_users_differ(self):
        a = family_trajectory(SynthConfig(family=MotionFamily.BIMANUAL, user="u0", n_frames=100))
        b = family_trajectory(SynthConfig(family=MotionFamily.BIMANUAL, user="u1", n_frames=100))
        assert not np.allclose(a, b)

    def test_unknown_family(self):
        with pytest.raises(UnknownFamily):
            synth_generate(SynthConfig(family="walk", n_frames=10), seed=0)  # type: ignore[arg-type]
