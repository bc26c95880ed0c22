"""YAML run configuration: file sections merged under explicit CLI values."""

from dataclasses import fields
from pathlib import Path
from typing import Any, Optional, TypeVar

import yaml

from handheadkit.core.config import ModelConfig, ProbeConfig, TrainConfig
from handheadkit.core.errors import BadConfig

SECTIONS = ("model", "train", "probe")

ConfigT = TypeVar("ConfigT", ModelConfig, TrainConfig, ProbeConfig)


def load_config_file(config_path: Path) -> dict[str, dict[str, Any]]:
    """
    Load a YAML run configuration.

    Args:
        config_path: Path to a file such as handheadkit.yaml

    Returns:
        Mapping of section name ("model", "train", "probe") to its values

    Raises:
        FileNotFoundError: If the file does not exist
        BadConfig: On invalid YAML, unknown sections or non-mapping sections

    Example:
        >>> sections = load_config_file(Path("handheadkit.yaml"))
        >>> sections["model"]["t_infer"]
        20
    """
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise BadConfig(f"Invalid YAML in {config_path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise BadConfig(f"{config_path} must contain a mapping of sections")

    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise BadConfig(f"Unknown config section(s): {', '.join(sorted(unknown))}")
    for name, section in data.items():
        if section is not None and not isinstance(section, dict):
            raise BadConfig(f"Config section '{name}' must be a mapping")
    return {name: dict(section or {}) for name, section in data.items()}


def build_config(cls: type[ConfigT], section: Optional[dict[str, Any]] = None, **overrides: Any) -> ConfigT:
    """
    Build a config dataclass from defaults, a YAML section and explicit overrides.

    Overrides that are None are ignored, so unset CLI options keep the YAML or default value.
    """
    values: dict[str, Any] = dict(section or {})
    values.update({k: v for k, v in overrides.items() if v is not None})
    names = {f.name for f in fields(cls)}
    unknown = set(values) - names
    if unknown:
        raise BadConfig(f"Unknown {cls.__name__} field(s): {', '.join(sorted(unknown))}")
    return cls.from_dict(values)
