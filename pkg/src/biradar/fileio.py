"""Text formats: scene files, frame records, and the stage CSVs.

All reals are written with six decimals.  Stages always exchange data
through these formats (also when composed in-process), so chaining the
CLI stage by stage is byte-identical to one pipeline invocation.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bilateration import CandidatePoint
from .cfar import Detection
from .config import RadarConfig
from .errors import DataError
from .simulate import Frame, Target
from .tracking import TrackSnapshot

DETECTIONS_HEADER = "frame,radar,bin,refined_bin,range_m,intensity"
CANDIDATES_HEADER = "frame,x_m,y_m,r1_m,r2_m,intensity"
TRACKS_HEADER = "frame,track_id,status,x_m,y_m,vx_m_s,vy_m_s"


def fmt(value: float) -> str:
    return f"{value:.6f}"


def quantize(value: float) -> float:
    """The value a reader sees after a write: 6-decimal round trip."""
    return float(fmt(value))


# -- scene files -------------------------------------------------------------

def parse_scene(text: str, source: str = "<scene>") -> list[Target]:
    """One target per line: id,x_m,y_m,vx_m_s,vy_m_s,rcs_dbsm ('#' comments)."""
    targets = []
    seen_ids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 6:
            raise DataError(f"{source}:{lineno}: expected 6 fields, got {len(parts)}")
        try:
            target = Target(
                id=int(parts[0]),
                x_m=float(parts[1]),
                y_m=float(parts[2]),
                vx_m_s=float(parts[3]),
                vy_m_s=float(parts[4]),
                rcs_dbsm=float(parts[5]),
            )
        except ValueError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from exc
        if target.y_m <= 0:
            raise DataError(f"{source}:{lineno}: target {target.id} needs y_m > 0")
        if target.id in seen_ids:
            raise DataError(f"{source}:{lineno}: duplicate target id {target.id}")
        seen_ids.add(target.id)
        targets.append(target)
    return targets


def load_scene(path: str | Path) -> list[Target]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read scene file {path}: {exc}") from exc
    return parse_scene(text, source=str(path))


# -- frame records -----------------------------------------------------------

def frame_record(frame: Frame) -> str:
    parts = [str(frame.frame_index), str(frame.radar_id)]
    for sample in frame.samples:
        parts.append(fmt(sample.real))
        parts.append(fmt(sample.imag))
    return ",".join(parts)


def write_frames(frames: list[Frame], path: str | Path) -> None:
    Path(path).write_text("".join(frame_record(f) + "\n" for f in frames))


def parse_frame_record(line: str, config: RadarConfig, source: str, lineno: int) -> Frame:
    parts = line.split(",")
    expected = 2 + 2 * config.samples_per_chirp
    if len(parts) != expected:
        raise DataError(
            f"{source}:{lineno}: expected {expected} fields for N="
            f"{config.samples_per_chirp}, got {len(parts)}"
        )
    try:
        frame_index = int(parts[0])
        radar_id = int(parts[1])
        values = np.array([float(p) for p in parts[2:]])
    except ValueError as exc:
        raise DataError(f"{source}:{lineno}: {exc}") from exc
    samples = values[0::2] + 1j * values[1::2]
    return Frame(radar_id=radar_id, frame_index=frame_index, samples=samples)


def read_frames(path: str | Path, config: RadarConfig) -> list[Frame]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read frames file {path}: {exc}") from exc
    frames = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        frames.append(parse_frame_record(line, config, str(path), lineno))
    return frames


# -- detections CSV ----------------------------------------------------------

def write_detections(detections: list[Detection], path: str | Path) -> None:
    lines = [DETECTIONS_HEADER]
    for d in detections:
        lines.append(
            f"{d.frame_index},{d.radar_id},{d.bin},{fmt(d.refined_bin)},"
            f"{fmt(d.range_m)},{fmt(d.intensity)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_detections(path: str | Path) -> list[Detection]:
    rows = _read_csv(path, DETECTIONS_HEADER)
    detections = []
    for source, lineno, parts in rows:
        try:
            detections.append(
                Detection(
                    frame_index=int(parts[0]),
                    radar_id=int(parts[1]),
                    bin=int(parts[2]),
                    refined_bin=float(parts[3]),
                    range_m=float(parts[4]),
                    intensity=float(parts[5]),
                )
            )
        except ValueError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from exc
    return detections


# -- candidates CSV ----------------------------------------------------------

def write_candidates(candidates: list[tuple[int, CandidatePoint]], path: str | Path) -> None:
    lines = [CANDIDATES_HEADER]
    for frame_index, c in candidates:
        lines.append(
            f"{frame_index},{fmt(c.x_m)},{fmt(c.y_m)},{fmt(c.r1_m)},"
            f"{fmt(c.r2_m)},{fmt(c.intensity)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_candidates(path: str | Path) -> list[tuple[int, CandidatePoint]]:
    rows = _read_csv(path, CANDIDATES_HEADER)
    candidates = []
    for source, lineno, parts in rows:
        try:
            frame_index = int(parts[0])
            point = CandidatePoint(
                x_m=float(parts[1]),
                y_m=float(parts[2]),
                r1_m=float(parts[3]),
                r2_m=float(parts[4]),
                intensity=float(parts[5]),
            )
        except ValueError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from exc
        candidates.append((frame_index, point))
    return candidates


# -- tracks CSV --------------------------------------------------------------

def write_tracks(rows: list[tuple[int, TrackSnapshot]], path: str | Path) -> None:
    lines = [TRACKS_HEADER]
    for frame_index, s in rows:
        lines.append(
            f"{frame_index},{s.track_id},{s.status},{fmt(s.x_m)},{fmt(s.y_m)},"
            f"{fmt(s.vx_m_s)},{fmt(s.vy_m_s)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")


def read_tracks(path: str | Path) -> list[tuple[int, TrackSnapshot]]:
    rows = _read_csv(path, TRACKS_HEADER)
    out = []
    for source, lineno, parts in rows:
        try:
            frame_index = int(parts[0])
            snapshot = TrackSnapshot(
                track_id=int(parts[1]),
                status=parts[2],
                x_m=float(parts[3]),
                y_m=float(parts[4]),
                vx_m_s=float(parts[5]),
                vy_m_s=float(parts[6]),
            )
        except ValueError as exc:
            raise DataError(f"{source}:{lineno}: {exc}") from exc
        out.append((frame_index, snapshot))
    return out


def _read_csv(path: str | Path, header: str) -> list[tuple[str, int, list[str]]]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or lines[0] != header:
        raise DataError(f"{path}:1: expected header {header!r}")
    n_fields = len(header.split(","))
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != n_fields:
            raise DataError(f"{path}:{lineno}: expected {n_fields} fields")
        rows.append((str(path), lineno, parts))
    return rows
