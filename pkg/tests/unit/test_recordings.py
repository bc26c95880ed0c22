"""Unit tests for recording file I/O."""

import json
from pathlib import Path

import pytest

from handheadkit.core.errors import FormatError, HandHeadError, SchemaError
from handheadkit.core.models import Coords, WorldFrame
from handheadkit.storage.recordings import list_recordings, load_corpus, load_recording, save_recording

HEADER = '{"type":"header","version":1,"fps":30,"user":"u1","activity":"reach","coords":"world"}'
FRAME_0 = '{"t":0,"head_pos":[0.0,1.6,0.0],"head_dir":[0.0,0.0,1.0],"lhand":[0.2,1.2,0.3],"rhand":[-0.2,1.2,0.3]}'
FRAME_1 = '{"t":1,"head_pos":[0.0,1.6,0.0],"head_dir":[0.0,0.0,1.0],"lhand":[0.21,1.2,0.3],"rhand":[-0.2,1.2,0.3]}'


def _write(path: Path, *lines: str) -> Path:
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestLoadRecording:
    """Test parsing of recording files."""

    def test_header_and_frames(self, temp_dir: Path):
        recording = load_recording(_write(temp_dir / "walk.jsonl", HEADER, FRAME_0, FRAME_1))

        assert len(recording) == 2
        assert recording.name == "walk"
        assert recording.meta.coords is Coords.WORLD
        assert recording.meta.labels() == {"user": "u1", "activity": "reach"}
        assert isinstance(recording.frames[0], WorldFrame)

    def test_missing_field_reports_line(self, temp_dir: Path):
        broken = FRAME_1.replace(',"rhand":[-0.2,1.2,0.3]', "")
        with pytest.raises(FormatError) as exc_info:
            load_recording(_write(temp_dir / "bad.jsonl", HEADER, FRAME_0, broken))
        assert exc_info.value.line == 3
        assert "rhand" in str(exc_info.value)

    def test_invalid_json(self, temp_dir: Path):
        with pytest.raises(FormatError) as exc_info:
            load_recording(_write(temp_dir / "bad.jsonl", HEADER, "{not json"))
        assert exc_info.value.line == 2

    def test_non_consecutive_frames(self, temp_dir: Path):
        with pytest.raises(FormatError, match="does not follow"):
            load_recording(_write(temp_dir / "gap.jsonl", HEADER, FRAME_0, FRAME_1.replace('"t":1', '"t":3')))

    def test_unknown_coords(self, temp_dir: Path):
        with pytest.raises(SchemaError, match="coords"):
            load_recording(_write(temp_dir / "bad.jsonl", HEADER.replace('"world"', '"polar"')))

    def test_missing_header(self, temp_dir: Path):
        with pytest.raises(FormatError):
            load_recording(_write(temp_dir / "bad.jsonl", FRAME_0))

    def test_head_direction_renormalised(self, temp_dir: Path):
        recording = load_recording(
            _write(temp_dir / "r.jsonl", HEADER, FRAME_0.replace("[0.0,0.0,1.0]", "[0.0,0.0,2.0]"))
        )
        assert recording.frames[0].head_dir == (0.0, 0.0, 1.0)

    def test_degenerate_head_direction(self, temp_dir: Path):
        with pytest.raises(FormatError):
            load_recording(_write(temp_dir / "r.jsonl", HEADER, FRAME_0.replace("[0.0,0.0,1.0]", "[0.0,0.0,0.0]")))

    def test_missing_file(self, temp_dir: Path):
        with pytest.raises(FileNotFoundError):
            load_recording(temp_dir / "absent.jsonl")


class TestSaveRecording:
    """Test canonical writing."""

    def test_canonical_fixture_round_trip(self, temp_dir: Path):
        """Test that save(load(f)) reproduces a canonical file byte for byte."""
        source = _write(temp_dir / "canonical.jsonl", HEADER, FRAME_0, FRAME_1)
        target = temp_dir / "copy.jsonl"

        save_recording(load_recording(source), target)

        assert target.read_bytes() == source.read_bytes()

    def test_relative_round_trip(self, temp_dir: Path, relative_recording):
        path = temp_dir / "rel.jsonl"
        save_recording(relative_recording, path)

        loaded = load_recording(path)

        assert loaded.meta.coords is Coords.RELATIVE
        assert loaded.frames == relative_recording.frames

    def test_lines_are_json_objects(self, temp_dir: Path, relative_recording):
        path = temp_dir / "rel.jsonl"
        save_recording(relative_recording, path)
        lines = path.read_text().splitlines()
        assert json.loads(lines[0])["type"] == "header"
        assert set(json.loads(lines[1])) == {"t", "ha", "he"}


class TestCorpus:
    """Test directory loading."""

    def test_sorted_listing(self, temp_dir: Path, recording_factory):
        for name in ("b", "a"):
            save_recording(recording_factory(5, name=name), temp_dir / f"{name}.jsonl")
        (temp_dir / "notes.txt").write_text("ignored")

        assert [p.name for p in list_recordings(temp_dir)] == ["a.jsonl", "b.jsonl"]
        assert [r.name for r in load_corpus(temp_dir)] == ["a", "b"]

    def test_empty_directory(self, temp_dir: Path):
        with pytest.raises(HandHeadError):
            load_corpus(temp_dir)

    def test_missing_directory(self, temp_dir: Path):
        with pytest.raises(FileNotFoundError):
            list_recordings(temp_dir / "absent")
