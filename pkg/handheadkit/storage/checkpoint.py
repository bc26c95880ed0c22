"""Checkpoint directories: a JSON manifest plus a flat little-endian float32 blob."""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
import torch

from handheadkit.core.config import ModelConfig
from handheadkit.core.errors import BadConfig, CorruptCheckpoint, VersionMismatch
from handheadkit.networks.autoencoder import HandHeadAutoencoder, Model, build_model, model_config_of

logger = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
MANIFEST_FILE = "manifest.json"
WEIGHTS_FILE = "weights.bin"
_BLOB_DTYPE = np.dtype("<f4")


def save_checkpoint(model: Model, path: Path) -> Path:
    """
    Write ``model`` to the checkpoint directory ``path``.

    Tensors are stored in state-dict order as row-major little-endian float32.

    Returns:
        The checkpoint directory
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    config = model_config_of(model)

    entries: list[dict[str, Any]] = []
    chunks: list[bytes] = []
    offset = 0
    for name, tensor in model.state_dict().items():
        array = np.ascontiguousarray(tensor.detach().cpu().to(torch.float32).numpy(), dtype=_BLOB_DTYPE)
        entries.append({"name": name, "shape": list(array.shape), "dtype": "f32", "offset": offset})
        chunks.append(array.tobytes(order="C"))
        offset += array.nbytes

    schedule = model.schedule.to_dict() if isinstance(model, HandHeadAutoencoder) else {}
    manifest = {"version": CHECKPOINT_VERSION, "tensors": entries, "config": config.to_dict(), "schedule": schedule}

    with open(path / WEIGHTS_FILE, "wb") as f:
        f.write(b"".join(chunks))
    with open(path / MANIFEST_FILE, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)

    logger.info(f"Saved checkpoint with {len(entries)} tensors ({offset} bytes) to {path}")
    return path


def read_manifest(path: Path) -> dict[str, Any]:
    """
    Read and validate the manifest of a checkpoint directory.

    Raises:
        CorruptCheckpoint: If the manifest is missing or malformed
        VersionMismatch: If the manifest version is not supported
    """
    manifest_path = Path(path) / MANIFEST_FILE
    try:
        with open(manifest_path, "r", encoding="utf-8") as f:
            manifest = json.load(f)
    except FileNotFoundError as e:
        raise CorruptCheckpoint(f"Missing {MANIFEST_FILE} in {path}") from e
    except json.JSONDecodeError as e:
        raise CorruptCheckpoint(f"Invalid JSON in {manifest_path}: {e}") from e

    if not isinstance(manifest, dict) or "tensors" not in manifest or "config" not in manifest:
        raise CorruptCheckpoint(f"Manifest {manifest_path} lacks tensors or config")
    if manifest.get("version") != CHECKPOINT_VERSION:
        raise VersionMismatch(f"Checkpoint version {manifest.get('version')} (supported: {CHECKPOINT_VERSION})")
    return manifest


def load_checkpoint(path: Path) -> Model:
    """
    Rebuild a model from a checkpoint directory.

    Every manifest entry is checked against the rebuilt model before any tensor is loaded.

    Raises:
        CorruptCheckpoint: On missing files, unknown or missing tensors, shape or size mismatches
        VersionMismatch: On an unsupported manifest version
    """
    path = Path(path)
    manifest = read_manifest(path)
    try:
        config = ModelConfig.from_dict(manifest["config"])
    except (BadConfig, ValueError, TypeError) as e:
        raise CorruptCheckpoint(f"Invalid model config in manifest: {e}") from e

    weights_path = path / WEIGHTS_FILE
    if not weights_path.exists():
        raise CorruptCheckpoint(f"Missing {WEIGHTS_FILE} in {path}")
    blob = weights_path.read_bytes()

    model = build_model(config)
    expected = model.state_dict()
    names = [entry["name"] for entry in manifest["tensors"]]
    if len(names) != len(set(names)) or set(names) != set(expected):
        missing = sorted(set(expected) - set(names))
        unknown = sorted(set(names) - set(expected))
        raise CorruptCheckpoint(f"Manifest tensors do not match the model (missing={missing}, unknown={unknown})")

    state: dict[str, torch.Tensor] = {}
    end_of_data = 0
    for entry in manifest["tensors"]:
        name = entry["name"]
        shape = tuple(int(d) for d in entry["shape"])
        if entry.get("dtype") != "f32":
            raise CorruptCheckpoint(f"Tensor {name} has unsupported dtype {entry.get('dtype')}")
        if shape != tuple(expected[name].shape):
            raise CorruptCheckpoint(f"Tensor {name} has shape {shape}, model expects {tuple(expected[name].shape)}")
        count = int(np.prod(shape, dtype=np.int64))
        offset = int(entry["offset"])
        end = offset + count * _BLOB_DTYPE.itemsize
        if offset < 0 or end > len(blob):
            raise CorruptCheckpoint(f"Weight blob too short for tensor {name} ({len(blob)} bytes, need {end})")
        array = np.frombuffer(blob, dtype=_BLOB_DTYPE, count=count, offset=offset).reshape(shape)
        state[name] = torch.from_numpy(array.astype(np.float32))
        end_of_data = max(end_of_data, end)

    if end_of_data != len(blob):
        raise CorruptCheckpoint(f"Weight blob has {len(blob)} bytes, manifest describes {end_of_data}")

    model.load_state_dict(state, strict=True)
    model.eval()
    logger.info(f"Loaded {config.variant.value} checkpoint from {path}")
    return model
