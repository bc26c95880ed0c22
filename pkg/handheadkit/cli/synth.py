"""Synth command for generating synthetic recording corpora."""

import logging
from pathlib import Path

from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from handheadkit.cli.common import run_guarded
from handheadkit.core.config import SynthConfig
from handheadkit.core.signals import synth_generate
from handheadkit.storage.recordings import RECORDING_SUFFIX, save_recording
from handheadkit.storage.reports import write_run_manifest
from handheadkit.utils.ui import format_recordings_table, print_success
from handheadkit.utils.validation import frames_for_minutes, parse_families, synthetic_user_ids

logger = logging.getLogger(__name__)

console = Console()


def recording_seed(seed: int, family_index: int, user_index: int) -> int:
    """Per-recording seed derived from the run seed."""
    return seed * 1000 + family_index * 100 + user_index


def synth_corpus(
    families: str,
    users: int,
    minutes: float,
    seed: int,
    out: Path,
    fps: float = 30.0,
) -> int:
    """
    Write one JSONL recording per (family, user) pair.

    Args:
        families: Comma-separated motion families
        users: Number of synthetic users
        minutes: Length of each recording in minutes
        seed: Run seed
        out: Output directory
        fps: Frame rate of the recordings

    Returns:
        Exit code (0 = success)
    """

    def body() -> int:
        family_list = parse_families(families)
        user_ids = synthetic_user_ids(users)
        n_frames = frames_for_minutes(minutes, fps)
        out.mkdir(parents=True, exist_ok=True)

        recordings = []
        total = len(family_list) * len(user_ids)
        with Progress(
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            console=console,
        ) as progress:
            task = progress.add_task("Synthesising recordings...", total=total)
            for fi, family in enumerate(family_list):
                for ui, user in enumerate(user_ids):
                    config = SynthConfig(family=family, user=user, n_frames=n_frames, fps=fps)
                    recording = synth_generate(config, recording_seed(seed, fi, ui))
                    save_recording(recording, out / f"{recording.name}{RECORDING_SUFFIX}")
                    recordings.append(recording)
                    progress.advance(task)

        write_run_manifest(
            out, "synth", {"families": families, "users": users, "minutes": minutes, "out": out}, seed
        )
        logger.info(f"Wrote {len(recordings)} recordings to {out}")
        console.print(format_recordings_table(recordings))
        print_success(f"Wrote {len(recordings)} recordings to {out}", console)
        return 0

    return run_guarded(body, console)
