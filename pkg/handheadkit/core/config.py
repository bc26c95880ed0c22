"""Configuration dataclasses for synthesis, models, training and probing."""

from dataclasses import asdict, dataclass, fields
from typing import Any, Optional

from handheadkit.core.errors import BadConfig
from handheadkit.core.models import MotionFamily, ModelVariant


def _known_fields(cls: type, data: dict[str, Any]) -> dict[str, Any]:
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise BadConfig(f"Unknown {cls.__name__} field(s): {', '.join(sorted(unknown))}")
    return dict(data)


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if value <= 0:
            raise BadConfig(f"{name} must be positive, got {value}")


@dataclass
class SynthConfig:
    """
    Parameters of one synthetic recording.

    Attributes:
        family: Motion family
        user: Synthetic user id; selects the amplitude/frequency/phase style
        n_frames: Number of frames to emit
        fps: Frames per second
        amplitude: Motion amplitude in metres (family default if None)
        frequency: Base motion frequency in Hz (family default if None)
        jitter_sigma: Standard deviation of the Gaussian jitter added to hands, metres
    """

    family: MotionFamily = MotionFamily.IDLE
    user: str = "u0"
    n_frames: int = 3600
    fps: float = 30.0
    amplitude: Optional[float] = None
    frequency: Optional[float] = None
    jitter_sigma: float = 0.002

    def __post_init__(self) -> None:
        """Validate synthesis parameters."""
        _require_positive(n_frames=self.n_frames, fps=self.fps)
        if self.jitter_sigma < 0:
            raise BadConfig("jitter_sigma cannot be negative")
        if self.amplitude is not None and self.amplitude <= 0:
            raise BadConfig("amplitude must be positive")
        if self.frequency is not None and self.frequency <= 0:
            raise BadConfig("frequency must be positive")


@dataclass
class ModelConfig:
    """
    Architecture and diffusion hyper-parameters.

    Defaults follow the published architecture; the desk-scale setup halves the channel widths
    and uses 20 inference steps (see handheadkit.yaml).
    """

    variant: ModelVariant = ModelVariant.OURS
    n: int = 40
    dn: int = 3
    encoder_channels: int = 16
    semantic_dim: int = 128
    unet_channels: int = 64
    time_dim: int = 128
    gn_groups: int = 8
    dropout: float = 0.1
    latent_dim: int = 32
    baseline_hidden: int = 32
    mlp_hidden: int = 128
    kl_weight: float = 1e-3
    signal_scale: float = 1.0
    forecast_weight: float = 1.0
    t_train: int = 1000
    t_infer: int = 100
    beta_start: float = 1e-4
    beta_end: float = 0.02
    zero_init: bool = True

    def __post_init__(self) -> None:
        """Validate architecture parameters."""
        if isinstance(self.variant, str):
            self.variant = ModelVariant(self.variant)
        _require_positive(
            n=self.n,
            encoder_channels=self.encoder_channels,
            semantic_dim=self.semantic_dim,
            unet_channels=self.unet_channels,
            time_dim=self.time_dim,
            gn_groups=self.gn_groups,
            latent_dim=self.latent_dim,
            baseline_hidden=self.baseline_hidden,
            mlp_hidden=self.mlp_hidden,
            signal_scale=self.signal_scale,
            t_train=self.t_train,
            t_infer=self.t_infer,
        )
        if self.dn < 0:
            raise BadConfig("dn cannot be negative")
        if not 0.0 <= self.dropout < 1.0:
            raise BadConfig("dropout must be in [0, 1)")
        if self.kl_weight < 0 or self.forecast_weight < 0:
            raise BadConfig("loss weights cannot be negative")
        if not self.variant.is_vae and self.n % 4 != 0:
            raise BadConfig(f"n must be divisible by 4, got {self.n}")
        if self.unet_channels % self.gn_groups != 0:
            raise BadConfig("unet_channels must be divisible by gn_groups")
        if self.time_dim % 2 != 0:
            raise BadConfig("time_dim must be even")

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON/YAML serialization."""
        data = asdict(self)
        data["variant"] = self.variant.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ModelConfig":
        """Create from dictionary (JSON/YAML deserialization)."""
        data = _known_fields(cls, data)
        if "variant" in data:
            data["variant"] = ModelVariant(data["variant"])
        return cls(**data)


@dataclass
class TrainConfig:
    """
    Optimisation settings.

    Attributes:
        epochs: Number of passes over the dataset
        learning_rate: Adam learning rate
        batch_size: Samples per step
        seed: Seed for initialisation, shuffling, time steps and noise
        workers: DataLoader worker processes (0 = load in the main process)
        stride: Window stride used when cutting training samples
        grad_clip: Max gradient norm (None = no clipping)
        lr_schedule: "constant" or "cosine"
    """

    epochs: int = 130
    learning_rate: float = 1e-4
    batch_size: int = 64
    seed: int = 0
    workers: int = 0
    stride: int = 10
    grad_clip: Optional[float] = None
    lr_schedule: str = "constant"

    def __post_init__(self) -> None:
        """Validate optimisation settings."""
        _require_positive(
            epochs=self.epochs, learning_rate=self.learning_rate, batch_size=self.batch_size, stride=self.stride
        )
        if self.workers < 0:
            raise BadConfig("workers cannot be negative")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise BadConfig("grad_clip must be positive when set")
        if self.lr_schedule not in ("constant", "cosine"):
            raise BadConfig(f"Unknown lr_schedule '{self.lr_schedule}' (use constant or cosine)")

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON/YAML serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TrainConfig":
        """Create from dictionary (JSON/YAML deserialization)."""
        return cls(**_known_fields(cls, data))


@dataclass
class ProbeConfig:
    """Linear-probe optimisation settings."""

    epochs: int = 60
    learning_rate: float = 1e-5
    batch_size: int = 64
    seed: int = 0

    def __post_init__(self) -> None:
        """Validate probe settings."""
        _require_positive(epochs=self.epochs, learning_rate=self.learning_rate, batch_size=self.batch_size)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON/YAML serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ProbeConfig":
        """Create from dictionary (JSON/YAML deserialization)."""
        return cls(**_known_fields(cls, data))
