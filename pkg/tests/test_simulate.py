"""Radar parameterization and beat-signal synthesis."""

import math

import numpy as np
import pytest

from biradar import ConfigError, DataError, RadarConfig, Target, synthesize_frame
from biradar.rangeproc import range_profile

from conftest import C


class TestDerivedParameters:
    def test_range_resolution_default(self, radar):
        # 3.49 GHz sweep -> 4.3 cm bins
        assert radar.range_resolution_m == pytest.approx(0.04295, abs=5e-6)
        assert abs(radar.range_resolution_m - 0.0430) < 0.0005

    def test_range_resolution_identity(self):
        radar = RadarConfig(bandwidth_hz=C / 2)
        assert radar.range_resolution_m == 1.0

    def test_range_resolution_150mhz(self):
        radar = RadarConfig(bandwidth_hz=150e6)
        assert radar.range_resolution_m == pytest.approx(C / (2 * 150e6), rel=1e-15)
        assert radar.range_resolution_m == pytest.approx(0.99931, abs=1e-5)

    def test_max_range_default(self, radar):
        assert radar.max_range_m == pytest.approx(5.498, abs=5e-4)
        assert abs(radar.max_range_m - 5.50) < 0.01

    def test_max_range_single_bin(self):
        radar = RadarConfig(samples_per_chirp=2)
        assert radar.max_range_m == 2 * radar.range_resolution_m

    def test_max_range_is_resolution_times_bins(self, radar):
        assert radar.max_range_m == radar.range_resolution_m * radar.samples_per_chirp
        radar2 = RadarConfig(bandwidth_hz=C / 2)
        assert radar2.max_range_m == pytest.approx(128.0, rel=1e-15)

    def test_invalid_configs_rejected(self):
        with pytest.raises(ConfigError):
            RadarConfig(bandwidth_hz=-1.0)
        with pytest.raises(ConfigError):
            RadarConfig(chirp_time_s=0.0)
        with pytest.raises(ConfigError):
            RadarConfig(samples_per_chirp=1)


class TestBeatFrequency:
    def test_zero_range(self, radar):
        assert radar.beat_frequency_hz(0.0) == 0.0

    def test_one_bin_is_one_dft_line(self, radar):
        # a target one bin away beats at exactly 1/T_c
        f = radar.beat_frequency_hz(radar.range_resolution_m)
        assert f == pytest.approx(1.0 / radar.chirp_time_s, rel=1e-12)
        assert f == pytest.approx(14534.88, abs=0.01)

    def test_max_range_hits_sample_rate(self, radar):
        f = radar.beat_frequency_hz(radar.max_range_m)
        assert f == pytest.approx(radar.sample_rate_hz, rel=1e-12)

    def test_negative_range_rejected(self, radar):
        with pytest.raises(ValueError):
            radar.beat_frequency_hz(-0.1)

    def test_linearity(self, radar):
        rng = np.random.default_rng(7)
        for r in rng.uniform(0.0, 5.0, size=50):
            assert radar.beat_frequency_hz(2 * r) == pytest.approx(
                2 * radar.beat_frequency_hz(r), rel=1e-12
            )


class TestSynthesizeFrame:
    def test_empty_scene_no_noise_is_zero(self, radar):
        frame = synthesize_frame([], 1, (0.0, 0.0), radar, noise_power=0.0)
        assert np.all(frame.samples == 0)

    def test_tone_lands_on_expected_bin(self, radar):
        k = 40
        target = Target(id=1, x_m=0.0, y_m=k * radar.range_resolution_m, rcs_dbsm=0.0)
        frame = synthesize_frame([target], 1, (0.0, 0.0), radar)
        profile = range_profile(frame, "rectangular")
        assert int(np.argmax(profile.power)) == k

    def test_deterministic_given_seed(self, radar):
        target = Target(id=1, x_m=0.3, y_m=2.0, rcs_dbsm=10.0)
        kwargs = dict(noise_power=0.5, seed=123, frame_index=4, frame_period_s=0.05)
        a = synthesize_frame([target], 1, (0.0, 0.0), radar, **kwargs)
        b = synthesize_frame([target], 1, (0.0, 0.0), radar, **kwargs)
        assert np.array_equal(a.samples, b.samples)

    def test_radar_noise_streams_independent(self, radar):
        a = synthesize_frame([], 1, (0.0, 0.0), radar, noise_power=1.0, seed=9)
        b = synthesize_frame([], 2, (0.2, 0.0), radar, noise_power=1.0, seed=9)
        assert not np.array_equal(a.samples, b.samples)

    def test_frame_noise_streams_independent(self, radar):
        a = synthesize_frame([], 1, (0.0, 0.0), radar, noise_power=1.0, seed=9, frame_index=0)
        b = synthesize_frame([], 1, (0.0, 0.0), radar, noise_power=1.0, seed=9, frame_index=1)
        assert not np.array_equal(a.samples, b.samples)

    def test_rcs_doubling(self, radar):
        base = Target(id=1, x_m=0.4, y_m=1.7, rcs_dbsm=5.0)
        louder = Target(id=1, x_m=0.4, y_m=1.7, rcs_dbsm=5.0 + 20 * math.log10(2))
        a = synthesize_frame([base], 1, (0.0, 0.0), radar)
        b = synthesize_frame([louder], 1, (0.0, 0.0), radar)
        ratio = np.abs(b.samples) / np.abs(a.samples)
        assert np.allclose(ratio, 2.0, rtol=1e-9)

    def test_target_beyond_max_range_names_target(self, radar):
        target = Target(id=42, x_m=0.0, y_m=6.0)
        with pytest.raises(DataError, match="target 42"):
            synthesize_frame([target], 1, (0.0, 0.0), radar)

    def test_targets_move_between_frames(self, radar):
        target = Target(id=1, x_m=0.0, y_m=1.0, vy_m_s=2.0)
        late = synthesize_frame(
            [target], 1, (0.0, 0.0), radar, frame_index=10, frame_period_s=0.05
        )
        profile = range_profile(late, "hann")
        # after 0.5 s the target is at 2.0 m
        expected_bin = 2.0 / radar.range_resolution_m
        assert abs(int(np.argmax(profile.power)) - expected_bin) <= 1
