import numpy as np
import pytest

from vicaug.signal import Signal

SR = 16000


def tone(freq, seconds=1.0, sr=SR, amp=0.3, taper=False):
    t = np.arange(int(round(seconds * sr))) / sr
    samples = amp * np.sin(2 * np.pi * freq * t)
    if taper:
        samples = samples * np.hanning(len(samples))
    return Signal(samples, sr)


def speechish(seconds=1.0, sr=SR, seed=0):
    """Broadband deterministic test signal with a speech-like spectral tilt."""
    rng = np.random.default_rng(seed)
    n = int(round(seconds * sr))
    t = np.arange(n) / sr
    samples = (
        0.3 * np.sin(2 * np.pi * 220 * t)
        + 0.2 * np.sin(2 * np.pi * 1400 * t + 0.7)
        + 0.1 * np.sin(2 * np.pi * 3300 * t + 1.9)
        + 0.05 * rng.standard_normal(n)
    )
    return Signal(samples, sr)


@pytest.fixture
def speech():
    return speechish()
