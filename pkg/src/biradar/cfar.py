"""Cell-averaging CFAR detection, run pruning and near-field blanking.

The threshold for the cell under test is alpha * mean(training cells)
with alpha = N_t * (P_fa^(-1/N_t) - 1), which holds the design false
alarm probability exactly when power cells are exponentially distributed.
Near the array edges only the available side's training cells are used
and N_t / alpha are recomputed, so every cell keeps the same design P_fa.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import CfarParams, GeometryConfig, RadarConfig
from .rangeproc import RangeProfile, bin_to_range, refine_peak


@dataclass(frozen=True)
class Detection:
    """One pruned per-radar target report."""

    radar_id: int
    frame_index: int
    bin: int
    refined_bin: float
    range_m: float
    intensity: float  # power at the peak bin


def cfar_scale(n_training, probability_false_alarm):
    """Threshold multiplier alpha = N_t * (P_fa^(-1/N_t) - 1), elementwise."""
    return n_training * (probability_false_alarm ** (-1.0 / n_training) - 1.0)


def ca_cfar(profile: RangeProfile, params: CfarParams) -> np.ndarray:
    """Detected bin indices (sorted) of cells exceeding the adaptive threshold."""
    power = np.asarray(profile.power, dtype=float)
    n_bins = len(power)
    guard = params.guard_cells_per_side
    train = params.training_cells_per_side
    if 2 * (guard + train) + 1 > n_bins:
        raise ValueError(
            f"CFAR window ({2 * (guard + train) + 1} cells) exceeds profile length {n_bins}"
        )

    k = np.arange(n_bins)
    csum = np.concatenate(([0.0], np.cumsum(power)))

    # left training window [k-guard-train, k-guard-1], clipped at 0
    left_hi = np.clip(k - guard, 0, n_bins)
    left_lo = np.clip(k - guard - train, 0, n_bins)
    left_sum = csum[left_hi] - csum[left_lo]
    left_count = left_hi - left_lo

    # right training window [k+guard+1, k+guard+train], clipped at n_bins-1
    right_lo = np.clip(k + guard + 1, 0, n_bins)
    right_hi = np.clip(k + guard + train + 1, 0, n_bins)
    right_sum = csum[right_hi] - csum[right_lo]
    right_count = right_hi - right_lo

    n_training = left_count + right_count
    alpha = cfar_scale(n_training, params.probability_false_alarm)
    threshold = alpha * (left_sum + right_sum) / n_training
    return k[power > threshold]


def prune(raw_bins, profile: RangeProfile) -> list[int]:
    """Collapse each maximal run of consecutive detected bins to its peak.

    Ties inside a run go to the lowest bin index; output is ascending.
    """
    power = profile.power
    peaks: list[int] = []
    run: list[int] = []
    for b in sorted(int(b) for b in raw_bins):
        if run and b != run[-1] + 1:
            peaks.append(_run_argmax(run, power))
            run = []
        run.append(b)
    if run:
        peaks.append(_run_argmax(run, power))
    return peaks


def _run_argmax(run: list[int], power: np.ndarray) -> int:
    best = run[0]
    for b in run[1:]:
        if power[b] > power[best]:
            best = b
    return best


def blank_near_field(detections: list[Detection], geometry: GeometryConfig) -> list[Detection]:
    """Drop detections closer than the near-field blanking distance."""
    return [d for d in detections if d.range_m >= geometry.min_range_m]


def detect(
    profile: RangeProfile,
    params: CfarParams,
    geometry: GeometryConfig,
    config: RadarConfig,
) -> list[Detection]:
    """Full per-profile chain: CFAR, prune, sub-bin refine, blank."""
    raw = ca_cfar(profile, params)
    detections = []
    for peak_bin in prune(raw, profile):
        refined = refine_peak(profile, peak_bin)
        detections.append(
            Detection(
                radar_id=profile.radar_id,
                frame_index=profile.frame_index,
                bin=peak_bin,
                refined_bin=refined,
                range_m=bin_to_range(refined, config),
                intensity=float(profile.power[peak_bin]),
            )
        )
    return blank_near_field(detections, geometry)
