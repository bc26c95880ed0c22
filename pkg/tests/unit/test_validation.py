"""Unit tests for input validation utilities."""

import pytest

from handheadkit.core.errors import BadConfig, UnknownFamily
from handheadkit.core.models import ModelVariant, MotionFamily
from handheadkit.utils.validation import (
    check_window,
    frames_for_minutes,
    parse_families,
    parse_variant,
    synthetic_user_ids,
)


class TestParseFamilies:
    """Test motion family parsing."""

    def test_all_families(self):
        assert parse_families("reach,idle,bimanual") == [
            MotionFamily.REACH,
            MotionFamily.IDLE,
            MotionFamily.BIMANUAL,
        ]

    def test_whitespace_and_case(self):
        assert parse_families(" Reach , IDLE ") == [MotionFamily.REACH, MotionFamily.IDLE]

    def test_unknown_family(self):
        """Test that unknown names are rejected with the known list."""
        with pytest.raises(UnknownFamily, match="walk"):
            parse_families("reach,walk")

    def test_empty(self):
        with pytest.raises(UnknownFamily):
            parse_families(" , ")


class TestParseVariant:
    """Test --model parsing."""

    def test_known_variants(self):
        assert parse_variant("ours") is ModelVariant.OURS
        assert parse_variant("VAE-GRU") is ModelVariant.VAE_GRU
        assert parse_variant("ours-mlp-enc") is ModelVariant.OURS_MLP_ENC

    def test_unknown_variant(self):
        with pytest.raises(BadConfig, match="vae-transformer"):
            parse_variant("vae-transformer")


class TestCorpusSizing:
    """Test user ids and frame counts."""

    def test_user_ids(self):
        assert synthetic_user_ids(3) == ["u0", "u1", "u2"]

    def test_no_users(self):
        with pytest.raises(BadConfig):
            synthetic_user_ids(0)

    def test_frames_for_minutes(self):
        assert frames_for_minutes(2, 30.0) == 3600
        assert frames_for_minutes(0.5, 25.0) == 750

    def test_frames_for_non_positive_minutes(self):
        with pytest.raises(BadConfig):
            frames_for_minutes(0, 30.0)


class TestCheckWindow:
    """Test window parameter validation."""

    def test_valid(self):
        check_window(40, 3, 10)
        check_window(8, 0)

    @pytest.mark.parametrize("n", [0, 2, 42])
    def test_n_must_be_multiple_of_four(self, n):
        with pytest.raises(BadConfig, match="multiple of 4"):
            check_window(n, 3)

    def test_negative_dn(self):
        with pytest.raises(BadConfig):
            check_window(40, -1)

    def test_bad_stride(self):
        with pytest.raises(BadConfig):
            check_window(40, 3, 0)
