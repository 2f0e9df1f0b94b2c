"""Beat-signal synthesis for a two-radar scene.

Each frame is one chirp's worth of complex ADC samples for one radar.  A
point scatterer at range R contributes a single complex tone at the beat
frequency 2*R*S/c with the dechirp phase -2*pi*f_c*(2R/c); targets move
with constant velocity between frames and are frozen within a chirp.
The two radars are time-multiplexed, so neither sees the other's echoes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SPEED_OF_LIGHT, GeometryConfig, RadarConfig
from .errors import DataError


@dataclass(frozen=True)
class Target:
    """Point target with constant velocity and a fixed radar cross section."""

    id: int
    x_m: float
    y_m: float
    vx_m_s: float = 0.0
    vy_m_s: float = 0.0
    rcs_dbsm: float = 0.0

    def position_at(self, t_s: float) -> tuple[float, float]:
        return (self.x_m + self.vx_m_s * t_s, self.y_m + self.vy_m_s * t_s)

    def range_from(self, radar_position: tuple[float, float], t_s: float) -> float:
        x, y = self.position_at(t_s)
        return float(np.hypot(x - radar_position[0], y - radar_position[1]))


@dataclass(frozen=True)
class Frame:
    """One chirp of complex beat-signal samples from one radar."""

    radar_id: int
    frame_index: int
    samples: np.ndarray  # complex128, length N

    def __post_init__(self):
        if self.radar_id not in (1, 2):
            raise DataError(f"radar_id must be 1 or 2, got {self.radar_id}")
        if self.frame_index < 0:
            raise DataError(f"frame_index must be >= 0, got {self.frame_index}")


def target_amplitude(rcs_dbsm: float, range_m: float) -> float:
    """Received tone amplitude: 10^(RCS_dB/20) with a 1/R^2 monostatic falloff."""
    return 10.0 ** (rcs_dbsm / 20.0) / range_m**2


def synthesize_frame(
    targets: list[Target],
    radar_id: int,
    radar_position: tuple[float, float],
    config: RadarConfig,
    noise_power: float = 0.0,
    seed: int = 0,
    frame_index: int = 0,
    frame_period_s: float = 0.05,
) -> Frame:
    """Synthesize the beat signal one radar records for one chirp.

    Noise is circular complex Gaussian with total power `noise_power`,
    drawn from a generator seeded by (seed, radar_id, frame_index) so the
    two radars and successive frames use independent, reproducible streams.
    """
    if noise_power < 0:
        raise ValueError("noise_power must be >= 0")
    n_samples = config.samples_per_chirp
    t_frame = frame_index * frame_period_s
    n = np.arange(n_samples)
    samples = np.zeros(n_samples, dtype=np.complex128)
    for target in targets:
        range_m = target.range_from(radar_position, t_frame)
        if range_m >= config.max_range_m:
            raise DataError(
                f"target {target.id} at {range_m:.3f} m exceeds the "
                f"{config.max_range_m:.3f} m maximum range (frame {frame_index}, "
                f"radar {radar_id})"
            )
        beat_hz = config.beat_frequency_hz(range_m)
        amplitude = target_amplitude(target.rcs_dbsm, range_m)
        phase = -2.0 * np.pi * config.center_frequency_hz * (2.0 * range_m / SPEED_OF_LIGHT)
        samples += amplitude * np.exp(
            1j * (2.0 * np.pi * beat_hz * n / config.sample_rate_hz + phase)
        )
    if noise_power > 0:
        rng = np.random.default_rng([seed, radar_id, frame_index])
        scale = np.sqrt(noise_power / 2.0)
        samples += scale * (rng.standard_normal(n_samples) + 1j * rng.standard_normal(n_samples))
    return Frame(radar_id=radar_id, frame_index=frame_index, samples=samples)


def simulate_frames(
    targets: list[Target],
    radar: RadarConfig,
    geometry: GeometryConfig,
    frames: int,
    noise_power: float,
    seed: int,
    frame_period_s: float,
) -> list[Frame]:
    """All frames of a run, ordered by frame index with radar 1 before radar 2."""
    out = []
    for frame_index in range(frames):
        for radar_id in (1, 2):
            out.append(
                synthesize_frame(
                    targets,
                    radar_id,
                    geometry.radar_position(radar_id),
                    radar,
                    noise_power=noise_power,
                    seed=seed,
                    frame_index=frame_index,
                    frame_period_s=frame_period_s,
                )
            )
    return out
