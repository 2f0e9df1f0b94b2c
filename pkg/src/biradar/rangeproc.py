"""Range profile computation: windowed DFT of a beat-signal frame.

Profiles hold power (magnitude squared) per bin, not magnitude, so that
the cell-averaging CFAR false-alarm design holds exactly for complex
Gaussian noise (power cells are then exponentially distributed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RadarConfig
from .simulate import Frame


@dataclass(frozen=True)
class RangeProfile:
    radar_id: int
    frame_index: int
    power: np.ndarray  # nonnegative float64 per bin
    window_kind: str


def window(kind: str, n_samples: int) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(n_samples)
    if kind == "hann":
        # symmetric form 0.5*(1 - cos(2*pi*n/(N-1)))
        return np.hanning(n_samples)
    raise ValueError(f"unknown window kind {kind!r}")


def range_profile(frame: Frame, window_kind: str = "hann") -> RangeProfile:
    """Power spectrum |DFT(w * samples)|^2 with X[k] = sum_n x[n] e^(-j2pi kn/N)."""
    w = window(window_kind, len(frame.samples))
    spectrum = np.fft.fft(w * frame.samples)
    return RangeProfile(
        radar_id=frame.radar_id,
        frame_index=frame.frame_index,
        power=np.abs(spectrum) ** 2,
        window_kind=window_kind,
    )


def bin_to_range(bin_index: float, config: RadarConfig) -> float:
    """Map a (possibly fractional) DFT bin to meters."""
    if not 0 <= bin_index < config.samples_per_chirp:
        raise ValueError(
            f"bin {bin_index} outside [0, {config.samples_per_chirp})"
        )
    return bin_index * config.range_resolution_m


def refine_peak(profile: RangeProfile, bin_index: int) -> float:
    """Parabolic sub-bin peak interpolation on log power.

    offset = 0.5*(L - R) / (L - 2C + R) for the log powers at bin-1, bin,
    bin+1, clamped to [-0.5, 0.5].  Edge bins, non-peaks and degenerate
    neighborhoods are returned unrefined.
    """
    power = profile.power
    if bin_index < 1 or bin_index > len(power) - 2:
        return float(bin_index)
    left, center, right = power[bin_index - 1], power[bin_index], power[bin_index + 1]
    if center < left or center < right:
        return float(bin_index)
    if left <= 0.0 or center <= 0.0 or right <= 0.0:
        return float(bin_index)
    log_l, log_c, log_r = np.log(left), np.log(center), np.log(right)
    denom = log_l - 2.0 * log_c + log_r
    if denom == 0.0:
        return float(bin_index)
    offset = 0.5 * (log_l - log_r) / denom
    return bin_index + float(np.clip(offset, -0.5, 0.5))
