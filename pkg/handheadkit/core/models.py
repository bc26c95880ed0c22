"""Core data models for handheadkit."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

# Channel layout of a 9-D hand-head frame: left hand xyz, right hand xyz, head direction xyz.
HAND_CHANNELS = slice(0, 6)
HEAD_CHANNELS = slice(6, 9)
SIGNAL_DIM = 9


class Coords(Enum):
    """Coordinate system of a recording."""

    WORLD = "world"
    RELATIVE = "relative"


class MotionFamily(Enum):
    """Synthetic motion families."""

    REACH = "reach"  # one hand sweeps toward a target, head turns toward it
    IDLE = "idle"  # small-amplitude jitter
    BIMANUAL = "bimanual"  # both hands oscillate horizontally


class BaselineKind(Enum):
    """Network families used by the VAE baselines."""

    CNN = "1dcnn"
    LSTM = "lstm"
    GRU = "gru"
    MLP = "mlp"


class ModelVariant(Enum):
    """Model variants selectable from the CLI."""

    OURS = "ours"
    OURS_1DCNN_ENC = "ours-1dcnn-enc"
    OURS_LSTM_ENC = "ours-lstm-enc"
    OURS_GRU_ENC = "ours-gru-enc"
    OURS_MLP_ENC = "ours-mlp-enc"
    VAE_1DCNN = "vae-1dcnn"
    VAE_LSTM = "vae-lstm"
    VAE_GRU = "vae-gru"
    VAE_MLP = "vae-mlp"

    @property
    def is_vae(self) -> bool:
        """Whether this variant is a VAE baseline rather than the diffusion autoencoder."""
        return self.value.startswith("vae-")

    @property
    def baseline_kind(self) -> Optional[BaselineKind]:
        """Network family of the VAE or swapped encoder, None for the GCN encoder."""
        if self is ModelVariant.OURS:
            return None
        family = self.value.removeprefix("vae-").removeprefix("ours-").removesuffix("-enc")
        return BaselineKind(family)


def _as_vector(values: object, length: int, name: str) -> tuple[float, ...]:
    vector = tuple(float(v) for v in values)  # type: ignore[attr-defined]
    if len(vector) != length:
        raise ValueError(f"{name} must have {length} components, got {len(vector)}")
    if not all(math.isfinite(v) for v in vector):
        raise ValueError(f"{name} must be finite")
    return vector


@dataclass(frozen=True)
class WorldFrame:
    """
    One world-coordinate sample.

    Attributes:
        t: Frame index
        head_pos: Head position in metres
        head_dir: Head forward direction (unit after load-time normalisation)
        lhand_pos: Left hand position in metres
        rhand_pos: Right hand position in metres
    """

    t: int
    head_pos: tuple[float, ...]
    head_dir: tuple[float, ...]
    lhand_pos: tuple[float, ...]
    rhand_pos: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate frame data."""
        if self.t < 0:
            raise ValueError("Frame index cannot be negative")
        object.__setattr__(self, "head_pos", _as_vector(self.head_pos, 3, "head_pos"))
        object.__setattr__(self, "head_dir", _as_vector(self.head_dir, 3, "head_dir"))
        object.__setattr__(self, "lhand_pos", _as_vector(self.lhand_pos, 3, "lhand_pos"))
        object.__setattr__(self, "rhand_pos", _as_vector(self.rhand_pos, 3, "rhand_pos"))


@dataclass(frozen=True)
class HandHeadFrame:
    """
    One head-relative hand-head sample.

    Attributes:
        ha: Left then right hand position relative to the head, metres
        he: Unit head forward direction
        t: Frame index within its recording
    """

    ha: tuple[float, ...]
    he: tuple[float, ...]
    t: int = 0

    def __post_init__(self) -> None:
        """Validate frame data."""
        object.__setattr__(self, "ha", _as_vector(self.ha, 6, "ha"))
        object.__setattr__(self, "he", _as_vector(self.he, 3, "he"))
        norm = math.sqrt(sum(v * v for v in self.he))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"he must be a unit vector, got norm {norm:.8f}")

    def to_vector(self) -> np.ndarray:
        """Return the 9-D vector [ha, he]."""
        return np.asarray(self.ha + self.he, dtype=np.float64)


@dataclass
class HandHeadSequence:
    """
    A time window of hand-head frames.

    Attributes:
        frames: Ordered frames
        fps: Frames per second
    """

    frames: list[HandHeadFrame]
    fps: float = 30.0

    def __len__(self) -> int:
        return len(self.frames)

    def to_array(self) -> np.ndarray:
        """Return the sequence as a channel-first (9, N) float64 array."""
        if not self.frames:
            return np.zeros((SIGNAL_DIM, 0), dtype=np.float64)
        return np.stack([frame.to_vector() for frame in self.frames], axis=1)

    @classmethod
    def from_array(cls, array: np.ndarray, fps: float = 30.0, start: int = 0) -> "HandHeadSequence":
        """Build a sequence from a (9, N) array whose head columns are unit vectors."""
        array = np.asarray(array, dtype=np.float64)
        if array.ndim != 2 or array.shape[0] != SIGNAL_DIM:
            raise ValueError(f"Expected a (9, N) array, got shape {array.shape}")
        frames = [
            HandHeadFrame(ha=tuple(array[HAND_CHANNELS, i]), he=tuple(array[HEAD_CHANNELS, i]), t=start + i)
            for i in range(array.shape[1])
        ]
        return cls(frames=frames, fps=fps)


@dataclass
class Sample:
    """
    A training/evaluation window cut from a recording.

    Attributes:
        input: N input frames
        future: The dn frames that immediately follow the input
        labels: Optional labels copied from the recording (user, activity)
        start: Index of the first input frame in the source recording
        source: Name of the source recording
    """

    input: HandHeadSequence
    future: HandHeadSequence
    labels: dict[str, str] = field(default_factory=dict)
    start: int = 0
    source: str = ""


@dataclass
class RecordingMeta:
    """
    Header of a recording file.

    Attributes:
        fps: Frames per second
        user: User identifier
        activity: Activity label
        coords: Coordinate system of the frames
        version: File format version
    """

    fps: float = 30.0
    user: str = ""
    activity: str = ""
    coords: Coords = Coords.RELATIVE
    version: int = 1

    def labels(self) -> dict[str, str]:
        """Return the non-empty labels."""
        labels = {"user": self.user, "activity": self.activity}
        return {k: v for k, v in labels.items() if v}


@dataclass
class Recording:
    """
    A whole recording: header plus frames.

    Attributes:
        meta: Recording header
        frames: World or relative frames, indices increasing by one
        name: Display name (usually the file stem)
    """

    meta: RecordingMeta
    frames: list[Union[WorldFrame, HandHeadFrame]]
    name: str = ""

    def __post_init__(self) -> None:
        """Validate frame indices."""
        for prev, cur in zip(self.frames, self.frames[1:]):
            if cur.t != prev.t + 1:
                raise ValueError(f"Frame indices must increase by 1 ({prev.t} -> {cur.t})")

    def __len__(self) -> int:
        return len(self.frames)

    def to_array(self) -> np.ndarray:
        """Return relative frames as a (9, T) array."""
        if self.meta.coords is not Coords.RELATIVE:
            raise ValueError("to_array requires a relative-coordinate recording")
        return HandHeadSequence(frames=list(self.frames), fps=self.meta.fps).to_array()  # type: ignore[arg-type]


@dataclass
class LossRecord:
    """One row of the training log."""

    epoch: int
    step: int
    total: float
    l_noise: float
    l_forecast: float

    def to_dict(self) -> dict:
        """Convert to dictionary for CSV/JSON serialization."""
        return {
            "epoch": self.epoch,
            "step": self.step,
            "total": self.total,
            "l_noise": self.l_noise,
            "l_forecast": self.l_forecast,
        }


@dataclass
class SampleErrors:
    """Reconstruction errors of one evaluation window."""

    mpjpe_cm: float
    angular_deg: float

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {"mpjpe_cm": self.mpjpe_cm, "angular_deg": self.angular_deg}


@dataclass
class EvalReport:
    """
    Whole-dataset reconstruction report.

    Attributes:
        per_sample: Errors per evaluation window
        aggregates: Means and medians of both metrics
        cdf: CDF points per metric ("mpjpe_cm", "angular_deg")
        metadata: Free-form run information (model variant, ablations, checkpoint)
    """

    per_sample: list[SampleErrors]
    aggregates: dict[str, float]
    cdf: dict[str, list[tuple[float, float]]]
    metadata: dict[str, Union[str, int, float, bool]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "per_sample": [s.to_dict() for s in self.per_sample],
            "aggregates": dict(self.aggregates),
            "cdf": {metric: [[t, f] for t, f in points] for metric, points in self.cdf.items()},
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvalReport":
        """Create from dictionary (JSON deserialization)."""
        return cls(
            per_sample=[SampleErrors(float(s["mpjpe_cm"]), float(s["angular_deg"])) for s in data["per_sample"]],
            aggregates={k: float(v) for k, v in data["aggregates"].items()},
            cdf={m: [(float(t), float(f)) for t, f in pts] for m, pts in data["cdf"].items()},
            metadata=dict(data.get("metadata", {})),
        )


@dataclass
class ClusterResult:
    """
    Result of density-based clustering of semantic embeddings.

    Attributes:
        labels: Cluster id per embedding (-1 = noise)
        n_clusters: Number of clusters found
        representatives: Cluster id -> index of the member closest to the centroid
    """

    labels: list[int]
    n_clusters: int
    representatives: dict[int, int] = field(default_factory=dict)

    @property
    def n_noise(self) -> int:
        """Number of points labelled as noise."""
        return sum(1 for label in self.labels if label == -1)

    def sizes(self) -> dict[int, int]:
        """Return the member count per cluster id."""
        sizes: dict[int, int] = {}
        for label in self.labels:
            if label != -1:
                sizes[label] = sizes.get(label, 0) + 1
        return dict(sorted(sizes.items()))


@dataclass
class ProbeReport:
    """
    Linear-probe evaluation summary.

    Attributes:
        task: Label key the probe predicts ("user" or "activity")
        accuracy: Overall argmax accuracy
        chance: Accuracy of uniform guessing (1 / n_classes)
        per_class: Class name -> accuracy on that class
        confusion: Confusion matrix, rows = true class, columns = predicted
        class_names: Class order used by the matrix
    """

    task: str
    accuracy: float
    chance: float
    per_class: dict[str, float]
    confusion: list[list[int]]
    class_names: list[str]

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "task": self.task,
            "accuracy": self.accuracy,
            "chance": self.chance,
            "per_class": dict(self.per_class),
            "confusion": [list(row) for row in self.confusion],
            "class_names": list(self.class_names),
        }
