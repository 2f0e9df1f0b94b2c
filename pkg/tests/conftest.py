import numpy as np
import pytest

from biradar import Frame, GeometryConfig, RadarConfig

C = 299_792_458.0


@pytest.fixture
def radar() -> RadarConfig:
    """Default 79 GHz / 3.49 GHz / 68.8 us / N=128 configuration."""
    return RadarConfig()


@pytest.fixture
def geometry() -> GeometryConfig:
    return GeometryConfig()


def make_tone_frame(bin_f: float, n: int = 128, amplitude: float = 1.0,
                    phase: float = 0.0, radar_id: int = 1, frame_index: int = 0) -> Frame:
    """Frame holding a single complex tone at a (possibly fractional) DFT bin."""
    t = np.arange(n)
    samples = amplitude * np.exp(1j * (2 * np.pi * bin_f * t / n + phase))
    return Frame(radar_id=radar_id, frame_index=frame_index, samples=samples)


def direct_dft_power(samples: np.ndarray, w: np.ndarray) -> np.ndarray:
    """O(N^2) reference DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N)."""
    x = w * samples
    n = len(x)
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    dft = np.exp(-2j * np.pi * k * m / n) @ x
    return np.abs(dft) ** 2
