"""Input validation utilities for CLI arguments."""

from typing import Optional

from handheadkit.core.errors import BadConfig, UnknownFamily
from handheadkit.core.models import MotionFamily, ModelVariant


def parse_families(value: str) -> list[MotionFamily]:
    """
    Parse a comma-separated list of motion families.

    Raises:
        UnknownFamily: If a name is not a known family
    """
    names = [part.strip().lower() for part in value.split(",") if part.strip()]
    if not names:
        raise UnknownFamily("No motion family given")
    families = []
    for name in names:
        try:
            families.append(MotionFamily(name))
        except ValueError as e:
            known = ", ".join(f.value for f in MotionFamily)
            raise UnknownFamily(f"Unknown motion family '{name}' (known: {known})") from e
    return families


def parse_variant(value: str) -> ModelVariant:
    """Parse a --model value."""
    try:
        return ModelVariant(value.strip().lower())
    except ValueError as e:
        known = ", ".join(v.value for v in ModelVariant)
        raise BadConfig(f"Unknown model '{value}' (choose from: {known})") from e


def synthetic_user_ids(count: int) -> list[str]:
    """User ids u0..u{count-1}."""
    if count < 1:
        raise BadConfig(f"Need at least one user, got {count}")
    return [f"u{i}" for i in range(count)]


def frames_for_minutes(minutes: float, fps: float) -> int:
    """Number of frames in ``minutes`` of recording at ``fps``."""
    if minutes <= 0 or fps <= 0:
        raise BadConfig(f"minutes and fps must be positive, got {minutes}, {fps}")
    return int(round(minutes * 60.0 * fps))


def check_window(n: int, dn: int, stride: Optional[int] = None) -> None:
    """Reject window parameters the networks cannot use."""
    if n < 4 or n % 4 != 0:
        raise BadConfig(f"--n must be a positive multiple of 4, got {n}")
    if dn < 0:
        raise BadConfig(f"--dn cannot be negative, got {dn}")
    if stride is not None and stride < 1:
        raise BadConfig(f"stride must be positive, got {stride}")
