"""Hand-head signal model: relative coordinates, windowing and synthetic recordings."""

import logging
import math
import re
import warnings
import zlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from handheadkit.core.config import SynthConfig
from handheadkit.core.errors import BadConfig, DegenerateDirection, SchemaError, UnknownFamily
from handheadkit.core.models import (
    HAND_CHANNELS,
    HEAD_CHANNELS,
    Coords,
    HandHeadFrame,
    HandHeadSequence,
    MotionFamily,
    Recording,
    RecordingMeta,
    Sample,
    WorldFrame,
)

logger = logging.getLogger(__name__)

MIN_DIRECTION_NORM = 1e-8
UNIT_TOLERANCE = 1e-12
DEFAULT_SANITY_RADIUS = 3.0


class TooShortWarning(UserWarning):
    """Issued when a recording is shorter than one window."""

    pass


def normalize_direction(direction: Sequence[float]) -> tuple[float, ...]:
    """
    Scale a direction vector to unit length.

    Vectors already within 1e-12 of unit length are returned unchanged, which keeps repeated
    normalisation idempotent.

    Raises:
        DegenerateDirection: If the norm is at most 1e-8
    """
    vector = tuple(float(v) for v in direction)
    norm = math.sqrt(sum(v * v for v in vector))
    if not norm > MIN_DIRECTION_NORM:
        raise DegenerateDirection(f"Direction {vector} has norm {norm:.3g}, cannot normalise")
    if abs(norm - 1.0) <= UNIT_TOLERANCE:
        return vector
    return tuple(v / norm for v in vector)


def to_relative(frame: WorldFrame) -> HandHeadFrame:
    """
    Express a world frame in head-relative coordinates.

    Hands are translated so the head position is the origin; the head contributes only its
    normalised forward direction.

    Raises:
        DegenerateDirection: If the head direction has (near) zero length
    """
    ha = tuple(h - p for h, p in zip(frame.lhand_pos, frame.head_pos)) + tuple(
        h - p for h, p in zip(frame.rhand_pos, frame.head_pos)
    )
    return HandHeadFrame(ha=ha, he=normalize_direction(frame.head_dir), t=frame.t)


def to_relative_recording(recording: Recording) -> Recording:
    """Convert a world-coordinate recording to relative coordinates (relative ones pass through)."""
    if recording.meta.coords is Coords.RELATIVE:
        return recording
    meta = RecordingMeta(
        fps=recording.meta.fps,
        user=recording.meta.user,
        activity=recording.meta.activity,
        coords=Coords.RELATIVE,
        version=recording.meta.version,
    )
    frames = [to_relative(frame) for frame in recording.frames]  # type: ignore[arg-type]
    return Recording(meta=meta, frames=list(frames), name=recording.name)


def check_sanity(recording: Recording, radius: float = DEFAULT_SANITY_RADIUS) -> list[int]:
    """
    Flag relative frames whose hand coordinates exceed the sanity radius.

    Values are reported, never clipped.

    Returns:
        Frame indices (``t``) of the violating frames
    """
    if recording.meta.coords is not Coords.RELATIVE:
        raise SchemaError("check_sanity requires relative coordinates")
    frames = recording.frames
    flagged = [frame.t for frame in frames if any(abs(v) > radius for v in frame.ha)]  # type: ignore[union-attr]
    if flagged:
        logger.warning(
            f"{recording.name or 'recording'}: {len(flagged)} frame(s) with hand coordinates beyond "
            f"{radius:.2f} m (first t={flagged[0]})"
        )
    return flagged


def window(recording: Recording, n: int, dn: int, stride: int) -> list[Sample]:
    """
    Cut a relative recording into (input, future) samples.

    Windows start at 0, stride, 2*stride, ... and windows that would run past the end are
    dropped. A recording shorter than n + dn frames yields no samples and a TooShortWarning.

    Args:
        recording: Relative-coordinate recording
        n: Input length
        dn: Forecast horizon (future frames)
        stride: Distance between consecutive window starts

    Returns:
        Samples in start order, labels copied from the recording header
    """
    if n < 1 or dn < 0 or stride < 1:
        raise BadConfig(f"Invalid windowing parameters n={n}, dn={dn}, stride={stride}")
    if recording.meta.coords is not Coords.RELATIVE:
        raise SchemaError("window requires relative coordinates; convert with to_relative_recording first")

    total = len(recording)
    span = n + dn
    if total < span:
        message = f"{recording.name or 'recording'} has {total} frames, fewer than n+dn={span}"
        logger.warning(message)
        warnings.warn(message, TooShortWarning, stacklevel=2)
        return []

    fps = recording.meta.fps
    labels = recording.meta.labels()
    frames: list[HandHeadFrame] = list(recording.frames)  # type: ignore[arg-type]
    samples = []
    for start in range(0, total - span + 1, stride):
        samples.append(
            Sample(
                input=HandHeadSequence(frames=frames[start : start + n], fps=fps),
                future=HandHeadSequence(frames=frames[start + n : start + span], fps=fps),
                labels=dict(labels),
                start=start,
                source=recording.name,
            )
        )
    return samples


# Synthetic corpus -------------------------------------------------------------------------

# Rest positions of the hands relative to the head (x left, y up, z forward), metres.
_REST_LEFT = np.array([0.2, -0.45, 0.3])
_REST_RIGHT = np.array([-0.2, -0.45, 0.3])


@dataclass(frozen=True)
class UserStyle:
    """Per-user modulation of the synthetic motion families."""

    amplitude_scale: float
    frequency_scale: float
    phase: float
    height_offset: float


@dataclass(frozen=True)
class FamilyDefaults:
    """Default amplitude (m) and frequency (Hz) of a motion family."""

    amplitude: float
    frequency: float


FAMILY_DEFAULTS = {
    MotionFamily.REACH: FamilyDefaults(amplitude=0.35, frequency=0.25),
    MotionFamily.IDLE: FamilyDefaults(amplitude=0.01, frequency=0.2),
    MotionFamily.BIMANUAL: FamilyDefaults(amplitude=0.15, frequency=0.5),
}


def user_style(user: str) -> UserStyle:
    """
    Deterministic motion style of a synthetic user.

    Ids of the form ``u<k>`` map to style k; other ids are hashed.
    """
    match = re.fullmatch(r"u(\d+)", user)
    index = int(match.group(1)) if match else zlib.crc32(user.encode("utf-8")) % 97
    return UserStyle(
        amplitude_scale=0.95 + 0.1 * (index % 3),
        frequency_scale=(1.0, 0.8, 1.25)[(index // 3 + index) % 3],
        phase=2.0 * math.pi * ((index * 3) % 7) / 7.0,
        height_offset=-0.04 * (index % 4),
    )


def _head_direction(yaw: np.ndarray, pitch: np.ndarray) -> np.ndarray:
    return np.stack([np.sin(yaw) * np.cos(pitch), np.sin(pitch), np.cos(yaw) * np.cos(pitch)], axis=1)


def family_trajectory(config: SynthConfig, phase: float = 0.0) -> np.ndarray:
    """
    Closed-form (jitter-free) trajectory of a synthetic recording.

    Returns:
        (T, 9) array: left hand, right hand (relative, metres), unit head direction
    """
    family = config.family
    if family not in FAMILY_DEFAULTS:
        raise UnknownFamily(f"Unknown motion family: {family}")
    defaults = FAMILY_DEFAULTS[family]
    style = user_style(config.user)
    amplitude = (config.amplitude if config.amplitude is not None else defaults.amplitude) * style.amplitude_scale
    frequency = (config.frequency if config.frequency is not None else defaults.frequency) * style.frequency_scale
    omega = 2.0 * math.pi * frequency
    t = np.arange(config.n_frames, dtype=np.float64) / config.fps
    phi = style.phase + phase

    rest_l = _REST_LEFT + np.array([0.0, style.height_offset, 0.0])
    rest_r = _REST_RIGHT + np.array([0.0, style.height_offset, 0.0])
    lhand = np.tile(rest_l, (t.size, 1))
    rhand = np.tile(rest_r, (t.size, 1))

    if family is MotionFamily.REACH:
        # raised cosine: smooth excursion from rest (g=0) to the target (g=1) and back
        g = 0.5 * (1.0 - np.cos(omega * t + phi))
        rhand += amplitude * g[:, None] * np.array([-0.3, 0.3, 1.0])
        lhand += 0.01 * np.stack([np.sin(omega * t), np.cos(omega * t), np.zeros_like(t)], axis=1)
        yaw = -0.6 * g
        pitch = -0.25 * g
    elif family is MotionFamily.IDLE:
        lhand += amplitude * np.stack(
            [np.sin(omega * t + phi), np.sin(0.7 * omega * t + phi), np.zeros_like(t)], axis=1
        )
        rhand += amplitude * np.stack(
            [np.sin(omega * t + phi + 1.0), np.sin(0.7 * omega * t + phi + 2.0), np.zeros_like(t)], axis=1
        )
        yaw = 0.05 * np.sin(0.5 * omega * t + phi)
        pitch = -0.1 + 0.02 * np.sin(0.3 * omega * t)
    elif family is MotionFamily.BIMANUAL:
        sweep = amplitude * np.sin(omega * t + phi)
        lift = 0.02 * np.sin(2.0 * omega * t + phi)
        lhand += np.stack([sweep, lift, np.zeros_like(t)], axis=1)
        rhand += np.stack([-sweep, lift, np.zeros_like(t)], axis=1)
        yaw = 0.1 * np.sin(omega * t + phi)
        pitch = -0.3 + 0.05 * np.sin(omega * t)
    else:
        raise UnknownFamily(f"Unknown motion family: {family}")

    return np.concatenate([lhand, rhand, _head_direction(yaw, pitch)], axis=1)


def synth_generate(config: SynthConfig, seed: int) -> Recording:
    """
    Generate a deterministic synthetic relative-coordinate recording.

    Hands follow smooth parametric curves of the chosen family, modulated by the user's style,
    plus Gaussian jitter of ``config.jitter_sigma``; head directions are unit vectors.

    Raises:
        UnknownFamily: If ``config.family`` is not a known motion family
    """
    if not isinstance(config.family, MotionFamily):
        try:
            config.family = MotionFamily(config.family)
        except ValueError as e:
            raise UnknownFamily(f"Unknown motion family: {config.family}") from e

    rng = np.random.default_rng(seed)
    phase = float(rng.uniform(0.0, 2.0 * math.pi))
    signal = family_trajectory(config, phase=phase)

    if config.jitter_sigma > 0:
        signal[:, HAND_CHANNELS] += rng.normal(0.0, config.jitter_sigma, size=(signal.shape[0], 6))
        signal[:, HEAD_CHANNELS] += rng.normal(0.0, config.jitter_sigma, size=(signal.shape[0], 3))
    signal[:, HEAD_CHANNELS] /= np.linalg.norm(signal[:, HEAD_CHANNELS], axis=1, keepdims=True)

    frames = [
        HandHeadFrame(ha=tuple(row[HAND_CHANNELS]), he=tuple(row[HEAD_CHANNELS]), t=i) for i, row in enumerate(signal)
    ]
    meta = RecordingMeta(fps=config.fps, user=config.user, activity=config.family.value, coords=Coords.RELATIVE)
    logger.debug(f"Generated {config.family.value}/{config.user} recording with {len(frames)} frames (seed={seed})")
    return Recording(meta=meta, frames=list(frames), name=f"{config.family.value}_{config.user}")
