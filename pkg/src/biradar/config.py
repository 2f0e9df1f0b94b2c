"""Configuration types and the key=value config file loader.

Defaults follow the reference 79 GHz setup: 3.49 GHz sweep bandwidth,
68.8 us chirps, 128 complex samples per chirp, and a 20 cm baseline
between the two radars.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

WINDOW_KINDS = ("rectangular", "hann")


@dataclass(frozen=True)
class RadarConfig:
    """Chirp and sampling parameters of a single FMCW radar."""

    center_frequency_hz: float = 79e9
    bandwidth_hz: float = 3.49e9
    chirp_time_s: float = 68.8e-6
    samples_per_chirp: int = 128

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ConfigError("radar.bandwidth_hz must be > 0")
        if self.chirp_time_s <= 0:
            raise ConfigError("radar.chirp_time_s must be > 0")
        if self.samples_per_chirp < 2:
            raise ConfigError("radar.samples_per_chirp must be >= 2")

    @property
    def sample_rate_hz(self) -> float:
        """ADC sample rate f_s = N / T_c."""
        return self.samples_per_chirp / self.chirp_time_s

    @property
    def chirp_slope_hz_s(self) -> float:
        """Sweep slope S = B / T_c."""
        return self.bandwidth_hz / self.chirp_time_s

    @property
    def range_resolution_m(self) -> float:
        """Range bin size c / (2 B)."""
        return SPEED_OF_LIGHT / (2.0 * self.bandwidth_hz)

    @property
    def max_range_m(self) -> float:
        """Maximum unambiguous range N * c / (2 B) under complex sampling."""
        return self.samples_per_chirp * self.range_resolution_m

    def beat_frequency_hz(self, range_m: float) -> float:
        """Beat frequency 2 R S / c of a stationary scatterer at range_m."""
        if range_m < 0:
            raise ValueError(f"range must be >= 0, got {range_m}")
        return 2.0 * range_m * self.chirp_slope_hz_s / SPEED_OF_LIGHT


@dataclass(frozen=True)
class GeometryConfig:
    """Two-radar geometry: radar 1 at the origin, radar 2 at (baseline_m, 0)."""

    baseline_m: float = 0.20
    min_range_m: float = 0.30  # near-field blanking distance

    def __post_init__(self):
        if self.baseline_m <= 0:
            raise ConfigError("geometry.baseline_m must be > 0")
        if self.min_range_m < 0:
            raise ConfigError("geometry.min_range_m must be >= 0")

    def radar_position(self, radar_id: int) -> tuple[float, float]:
        if radar_id == 1:
            return (0.0, 0.0)
        if radar_id == 2:
            return (self.baseline_m, 0.0)
        raise ValueError(f"radar_id must be 1 or 2, got {radar_id}")


@dataclass(frozen=True)
class CfarParams:
    """Cell-averaging CFAR window sizes and design false-alarm probability."""

    training_cells_per_side: int = 8
    guard_cells_per_side: int = 2
    probability_false_alarm: float = 1e-3

    def __post_init__(self):
        if self.training_cells_per_side < 1:
            raise ConfigError("cfar.training_cells_per_side must be >= 1")
        if self.guard_cells_per_side < 0:
            raise ConfigError("cfar.guard_cells_per_side must be >= 0")
        if not 0.0 < self.probability_false_alarm < 1.0:
            raise ConfigError("cfar.probability_false_alarm must be in (0, 1)")

    @property
    def window_half_width(self) -> int:
        return self.training_cells_per_side + self.guard_cells_per_side


@dataclass(frozen=True)
class TrackerParams:
    """Constant-velocity Kalman tracker and track lifecycle settings."""

    process_noise_intensity: float = 1.0  # (m/s^2)^2 * s, white accel density
    measurement_noise_std_x_m: float = 0.05
    measurement_noise_std_y_m: float = 0.05
    gate_threshold: float = 9.21  # chi-square 99%, 2 dof
    confirm_m: int = 3
    confirm_n: int = 5
    delete_misses: int = 5
    initial_velocity_std_m_s: float = 2.0

    def __post_init__(self):
        if self.process_noise_intensity <= 0:
            raise ConfigError("tracker.process_noise_intensity must be > 0")
        if self.measurement_noise_std_x_m <= 0 or self.measurement_noise_std_y_m <= 0:
            raise ConfigError("tracker measurement noise stds must be > 0")
        if self.gate_threshold <= 0:
            raise ConfigError("tracker.gate_threshold must be > 0")
        if not 1 <= self.confirm_m <= self.confirm_n:
            raise ConfigError("tracker confirm settings need 1 <= confirm_m <= confirm_n")
        if self.delete_misses < 1:
            raise ConfigError("tracker.delete_misses must be >= 1")
        if self.initial_velocity_std_m_s <= 0:
            raise ConfigError("tracker.initial_velocity_std_m_s must be > 0")


@dataclass(frozen=True)
class PipelineConfig:
    """Everything the pipeline needs for one run."""

    radar: RadarConfig = field(default_factory=RadarConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    cfar: CfarParams = field(default_factory=CfarParams)
    tracker: TrackerParams = field(default_factory=TrackerParams)
    pairing_slack_m: float | None = None  # None -> one range bin
    frame_period_s: float = 0.05
    frames: int = 50
    seed: int = 0
    noise_power: float = 0.0
    window_kind: str = "hann"

    def __post_init__(self):
        if self.pairing_slack_m is not None and self.pairing_slack_m < 0:
            raise ConfigError("pairing_slack_m must be >= 0")
        if self.frame_period_s <= 0:
            raise ConfigError("frame_period_s must be > 0")
        if self.frames < 1:
            raise ConfigError("frames must be >= 1")
        if self.noise_power < 0:
            raise ConfigError("noise_power must be >= 0")
        if self.window_kind not in WINDOW_KINDS:
            raise ConfigError(f"window_kind must be one of {WINDOW_KINDS}")
        if 2 * self.cfar.window_half_width + 1 > self.radar.samples_per_chirp:
            raise ConfigError("cfar window does not fit in samples_per_chirp")

    @property
    def slack_m(self) -> float:
        """Pairing slack; defaults to the range resolution."""
        if self.pairing_slack_m is not None:
            return self.pairing_slack_m
        return self.radar.range_resolution_m


# key -> (section name or None for top level, field name, parser)
_CONFIG_KEYS: dict[str, tuple[str | None, str, type]] = {
    "radar.center_frequency_hz": ("radar", "center_frequency_hz", float),
    "radar.bandwidth_hz": ("radar", "bandwidth_hz", float),
    "radar.chirp_time_s": ("radar", "chirp_time_s", float),
    "radar.samples_per_chirp": ("radar", "samples_per_chirp", int),
    "geometry.baseline_m": ("geometry", "baseline_m", float),
    "geometry.min_range_m": ("geometry", "min_range_m", float),
    "cfar.training_cells_per_side": ("cfar", "training_cells_per_side", int),
    "cfar.guard_cells_per_side": ("cfar", "guard_cells_per_side", int),
    "cfar.probability_false_alarm": ("cfar", "probability_false_alarm", float),
    "tracker.process_noise_intensity": ("tracker", "process_noise_intensity", float),
    "tracker.measurement_noise_std_x_m": ("tracker", "measurement_noise_std_x_m", float),
    "tracker.measurement_noise_std_y_m": ("tracker", "measurement_noise_std_y_m", float),
    "tracker.gate_threshold": ("tracker", "gate_threshold", float),
    "tracker.confirm_m": ("tracker", "confirm_m", int),
    "tracker.confirm_n": ("tracker", "confirm_n", int),
    "tracker.delete_misses": ("tracker", "delete_misses", int),
    "tracker.initial_velocity_std_m_s": ("tracker", "initial_velocity_std_m_s", float),
    "pairing_slack_m": (None, "pairing_slack_m", float),
    "frame_period_s": (None, "frame_period_s", float),
    "frames": (None, "frames", int),
    "seed": (None, "seed", int),
    "noise_power": (None, "noise_power", float),
    "window_kind": (None, "window_kind", str),
}

_SECTION_TYPES = {
    "radar": RadarConfig,
    "geometry": GeometryConfig,
    "cfar": CfarParams,
    "tracker": TrackerParams,
}


def parse_config(text: str, source: str = "<config>") -> PipelineConfig:
    """Parse `key = value` lines into a PipelineConfig.

    Blank lines and lines starting with '#' are ignored.  Unknown keys are
    errors; missing keys take the defaults.
    """
    sections: dict[str, dict] = {name: {} for name in _SECTION_TYPES}
    top: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        section, attr, converter = _CONFIG_KEYS[key]
        try:
            parsed = converter(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {value!r}") from exc
        if section is None:
            top[attr] = parsed
        else:
            sections[section][attr] = parsed

    try:
        kwargs = {name: _SECTION_TYPES[name](**vals) for name, vals in sections.items()}
        return PipelineConfig(**kwargs, **top)
    except ConfigError:
        raise
    except TypeError as exc:  # pragma: no cover - guarded by key table
        raise ConfigError(f"{source}: {exc}") from exc


def load_config(path: str | Path) -> PipelineConfig:
    """Read a config file; an empty or absent-of-overrides file yields defaults."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, source=str(path))
