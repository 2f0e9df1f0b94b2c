"""Figure rendering for pipeline reports.

Figures are written as SVG next to the CSV outputs.  The Agg-free SVG
backend needs no display; a fixed hash salt and stripped date metadata
keep the files reproducible run to run.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("svg")
matplotlib.rcParams["svg.hashsalt"] = "biradar"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .config import GeometryConfig, RadarConfig  # noqa: E402
from .rangeproc import RangeProfile  # noqa: E402
from .tracking import TrackSnapshot  # noqa: E402


def save_track_map(
    rows: list[tuple[int, TrackSnapshot]],
    radar: RadarConfig,
    geometry: GeometryConfig,
    path: str | Path,
) -> None:
    """Scatter of confirmed track positions over all frames, in meters.

    The viewport is fixed to [-R_max, R_max + d] x [0, R_max] so runs with
    the same radar configuration are directly comparable.
    """
    r_max = radar.max_range_m
    d = geometry.baseline_m
    fig, ax = plt.subplots(figsize=(6.0, 5.0))
    by_track: dict[int, tuple[list[float], list[float]]] = {}
    for _, snap in rows:
        if snap.status != "confirmed":
            continue
        xs, ys = by_track.setdefault(snap.track_id, ([], []))
        xs.append(snap.x_m)
        ys.append(snap.y_m)
    for track_id in sorted(by_track):
        xs, ys = by_track[track_id]
        ax.scatter(xs, ys, s=12, label=f"track {track_id}")
    ax.plot([0.0, d], [0.0, 0.0], "k^", markersize=9, label="radars")
    ax.set_xlim(-r_max, r_max + d)
    ax.set_ylim(0.0, r_max)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title("Confirmed track positions")
    if by_track:
        ax.legend(loc="upper right", fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def save_range_profile(
    profile: RangeProfile,
    radar: RadarConfig,
    path: str | Path,
    detection_ranges_m: list[float] | None = None,
) -> None:
    """Range profile in dB with detected peaks marked."""
    power = np.asarray(profile.power)
    ranges = np.arange(len(power)) * radar.range_resolution_m
    power_db = 10.0 * np.log10(np.maximum(power, 1e-30))
    fig, ax = plt.subplots(figsize=(6.0, 3.0))
    ax.plot(ranges, power_db, lw=1.0)
    if detection_ranges_m:
        floor = power_db.min()
        ax.plot(
            detection_ranges_m,
            [power_db[min(int(round(r / radar.range_resolution_m)), len(power) - 1)]
             for r in detection_ranges_m],
            "ro",
            label="detections",
        )
        ax.set_ylim(bottom=max(floor, power_db.max() - 90.0))
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("range [m]")
    ax.set_ylabel("power [dB]")
    ax.set_title(f"Range profile, radar {profile.radar_id}, frame {profile.frame_index}")
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def _save(fig, path: str | Path) -> None:
    fig.savefig(Path(path), format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)
