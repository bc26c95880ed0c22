"""Recording files: one JSON object per line, header first."""

import json
import logging
from pathlib import Path
from typing import Any, Union

from handheadkit.core.errors import FormatError, HandHeadError, SchemaError
from handheadkit.core.models import Coords, HandHeadFrame, Recording, RecordingMeta, WorldFrame
from handheadkit.core.signals import check_sanity, normalize_direction

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
RECORDING_SUFFIX = ".jsonl"

_WORLD_FIELDS = ("t", "head_pos", "head_dir", "lhand", "rhand")
_RELATIVE_FIELDS = ("t", "ha", "he")


def _dumps(obj: dict[str, Any]) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def _fps_value(fps: float) -> Union[int, float]:
    return int(fps) if float(fps).is_integer() else float(fps)


def _parse_header(data: Any) -> RecordingMeta:
    if not isinstance(data, dict) or data.get("type") != "header":
        raise FormatError("first line must be a header object", line=1)
    for key in ("version", "fps", "coords"):
        if key not in data:
            raise FormatError(f"header missing required field: {key}", line=1)
    if data["version"] != FORMAT_VERSION:
        raise SchemaError(f"Unsupported recording version: {data['version']}")
    try:
        coords = Coords(data["coords"])
    except ValueError as e:
        raise SchemaError(f"Unknown coords tag: {data['coords']!r} (use world or relative)") from e
    return RecordingMeta(
        fps=float(data["fps"]),
        user=str(data.get("user", "")),
        activity=str(data.get("activity", "")),
        coords=coords,
        version=FORMAT_VERSION,
    )


def _parse_frame(data: Any, coords: Coords, line: int) -> Union[WorldFrame, HandHeadFrame]:
    if not isinstance(data, dict):
        raise FormatError("frame line must be a JSON object", line=line)
    required = _WORLD_FIELDS if coords is Coords.WORLD else _RELATIVE_FIELDS
    for key in required:
        if key not in data:
            raise FormatError(f"frame missing required field: {key}", line=line)
    try:
        if coords is Coords.WORLD:
            return WorldFrame(
                t=int(data["t"]),
                head_pos=data["head_pos"],
                head_dir=normalize_direction(data["head_dir"]),
                lhand_pos=data["lhand"],
                rhand_pos=data["rhand"],
            )
        return HandHeadFrame(ha=data["ha"], he=normalize_direction(data["he"]), t=int(data["t"]))
    except (TypeError, ValueError) as e:
        raise FormatError(str(e), line=line) from e


def load_recording(path: Path) -> Recording:
    """
    Load a recording file.

    Head directions are re-normalised on load; relative recordings are checked against the
    sanity radius (violations are logged, not clipped).

    Raises:
        FormatError: On malformed JSON, missing fields or non-consecutive frame indices
        SchemaError: On an unknown coords tag or file version
        FileNotFoundError: If the file does not exist
    """
    path = Path(path)
    meta: RecordingMeta | None = None
    frames: list[Union[WorldFrame, HandHeadFrame]] = []

    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as e:
                raise FormatError(f"invalid JSON: {e.msg}", line=line_no) from e

            if meta is None:
                if line_no != 1:
                    raise FormatError("header must be on the first line", line=line_no)
                meta = _parse_header(data)
                continue

            frame = _parse_frame(data, meta.coords, line_no)
            if frames and frame.t != frames[-1].t + 1:
                raise FormatError(f"frame index {frame.t} does not follow {frames[-1].t}", line=line_no)
            frames.append(frame)

    if meta is None:
        raise FormatError("empty recording file", line=1)

    recording = Recording(meta=meta, frames=frames, name=path.stem)
    if meta.coords is Coords.RELATIVE:
        check_sanity(recording)
    logger.debug(f"Loaded {path}: {len(frames)} {meta.coords.value} frames")
    return recording


def save_recording(recording: Recording, path: Path) -> None:
    """Write a recording in the canonical line format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = recording.meta
    header = {
        "type": "header",
        "version": FORMAT_VERSION,
        "fps": _fps_value(meta.fps),
        "user": meta.user,
        "activity": meta.activity,
        "coords": meta.coords.value,
    }
    lines = [_dumps(header)]
    for frame in recording.frames:
        if isinstance(frame, WorldFrame):
            lines.append(
                _dumps(
                    {
                        "t": frame.t,
                        "head_pos": list(frame.head_pos),
                        "head_dir": list(frame.head_dir),
                        "lhand": list(frame.lhand_pos),
                        "rhand": list(frame.rhand_pos),
                    }
                )
            )
        else:
            lines.append(_dumps({"t": frame.t, "ha": list(frame.ha), "he": list(frame.he)}))

    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def list_recordings(directory: Path) -> list[Path]:
    """Return the recording files of a directory, sorted by name."""
    directory = Path(directory)
    if directory.is_file():
        return [directory]
    if not directory.is_dir():
        raise FileNotFoundError(f"Data directory not found: {directory}")
    return sorted(p for p in directory.iterdir() if p.suffix == RECORDING_SUFFIX)


def load_corpus(directory: Path) -> list[Recording]:
    """
    Load every recording of a directory (or a single file).

    Raises:
        HandHeadError: If the directory holds no recordings
    """
    paths = list_recordings(directory)
    if not paths:
        raise HandHeadError(f"No {RECORDING_SUFFIX} recordings found in {directory}")
    return [load_recording(p) for p in paths]
