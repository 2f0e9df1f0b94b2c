"""Stage runners and the end-to-end pipeline.

Stages communicate through the text formats in `fileio`, also when run
back to back in one process: each stage's output is written to disk and
read again before the next stage sees it.  That single quantization
point is what makes `pipeline` and the per-stage commands byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import fileio, plots
from .bilateration import CandidatePoint, pair_detections
from .cfar import Detection, detect
from .config import PipelineConfig
from .errors import DataError
from .rangeproc import range_profile
from .simulate import Frame, Target, simulate_frames
from .tracking import Tracker, TrackSnapshot


@dataclass
class PipelineStats:
    frames: int = 0
    detections: int = 0
    candidates: int = 0
    pairing: dict = field(default_factory=dict)
    confirmed_tracks: int = 0


def stage_simulate(config: PipelineConfig, targets: list[Target]) -> list[Frame]:
    return simulate_frames(
        targets,
        config.radar,
        config.geometry,
        frames=config.frames,
        noise_power=config.noise_power,
        seed=config.seed,
        frame_period_s=config.frame_period_s,
    )


def stage_detect(frames: list[Frame], config: PipelineConfig) -> list[Detection]:
    detections = []
    for frame in frames:
        try:
            profile = range_profile(frame, config.window_kind)
            detections.extend(detect(profile, config.cfar, config.geometry, config.radar))
        except (ValueError, DataError) as exc:
            raise DataError(f"detect failed at frame {frame.frame_index}: {exc}") from exc
    return detections


def stage_localize(
    detections: list[Detection], config: PipelineConfig, counters: dict | None = None
) -> list[tuple[int, CandidatePoint]]:
    by_frame: dict[int, tuple[list[Detection], list[Detection]]] = {}
    for det in detections:
        if det.radar_id not in (1, 2):
            raise DataError(f"detection with unknown radar id {det.radar_id}")
        pair = by_frame.setdefault(det.frame_index, ([], []))
        pair[det.radar_id - 1].append(det)
    candidates = []
    for frame_index in sorted(by_frame):
        dets1, dets2 = by_frame[frame_index]
        for point in pair_detections(
            dets1, dets2, config.geometry, config.slack_m, counters=counters
        ):
            candidates.append((frame_index, point))
    return candidates


def stage_track(
    candidates: list[tuple[int, CandidatePoint]],
    config: PipelineConfig,
    include_tentative: bool = False,
) -> list[tuple[int, TrackSnapshot]]:
    by_frame: dict[int, list[CandidatePoint]] = {}
    for frame_index, point in candidates:
        if not 0 <= frame_index < config.frames:
            raise DataError(
                f"candidate frame {frame_index} outside configured range "
                f"[0, {config.frames})"
            )
        by_frame.setdefault(frame_index, []).append(point)
    tracker = Tracker(config.tracker)
    rows = []
    for frame_index in range(config.frames):
        try:
            tracker.step(by_frame.get(frame_index, []), config.frame_period_s)
        except (ValueError, AssertionError) as exc:
            raise DataError(f"tracking failed at frame {frame_index}: {exc}") from exc
        for snapshot in tracker.snapshots(include_tentative=include_tentative):
            rows.append((frame_index, snapshot))
    return rows


def run_pipeline(
    config: PipelineConfig,
    out_dir: str | Path,
    scene_path: str | Path | None = None,
    frames_path: str | Path | None = None,
    include_tentative: bool = False,
    profile_frame: int | None = None,
) -> tuple[dict[str, Path], PipelineStats]:
    """simulate (or load frames) -> detect -> localize -> track -> figures.

    Returns the written output paths and run statistics.
    """
    if (scene_path is None) == (frames_path is None):
        raise ValueError("exactly one of scene_path or frames_path is required")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: dict[str, Path] = {}
    stats = PipelineStats()

    if scene_path is not None:
        targets = fileio.load_scene(scene_path)
        frames_file = out_dir / "frames.csv"
        fileio.write_frames(stage_simulate(config, targets), frames_file)
        outputs["frames"] = frames_file
    else:
        frames_file = Path(frames_path)
    frames = fileio.read_frames(frames_file, config.radar)
    stats.frames = len(frames)

    detections_file = out_dir / "detections.csv"
    fileio.write_detections(stage_detect(frames, config), detections_file)
    outputs["detections"] = detections_file
    detections = fileio.read_detections(detections_file)
    stats.detections = len(detections)

    candidates_file = out_dir / "candidates.csv"
    fileio.write_candidates(
        stage_localize(detections, config, counters=stats.pairing), candidates_file
    )
    outputs["candidates"] = candidates_file
    candidates = fileio.read_candidates(candidates_file)
    stats.candidates = len(candidates)

    tracks_file = out_dir / "tracks.csv"
    track_rows = stage_track(candidates, config, include_tentative=include_tentative)
    fileio.write_tracks(track_rows, tracks_file)
    outputs["tracks"] = tracks_file
    stats.confirmed_tracks = len(
        {s.track_id for _, s in track_rows if s.status == "confirmed"}
    )

    map_file = out_dir / "map.svg"
    plots.save_track_map(fileio.read_tracks(tracks_file), config.radar, config.geometry, map_file)
    outputs["map"] = map_file

    if profile_frame is not None:
        for radar_id in (1, 2):
            frame = next(
                (f for f in frames if f.frame_index == profile_frame and f.radar_id == radar_id),
                None,
            )
            if frame is None:
                raise DataError(f"no frame {profile_frame} for radar {radar_id} to plot")
            profile = range_profile(frame, config.window_kind)
            det_ranges = [
                d.range_m
                for d in detections
                if d.frame_index == profile_frame and d.radar_id == radar_id
            ]
            path = out_dir / f"profile_radar{radar_id}.svg"
            plots.save_range_profile(profile, config.radar, path, det_ranges)
            outputs[f"profile_radar{radar_id}"] = path

    return outputs, stats
