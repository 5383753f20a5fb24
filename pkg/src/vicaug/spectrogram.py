"""Log-magnitude spectrograms with PGM and CSV export.

Frames are Hann-windowed 25 ms segments at a 10 ms hop; the FFT size is the
next power of two at or above the frame length.  The PGM image puts
frequency on the vertical axis (highest bin on top) for visual inspection;
the CSV keeps the raw frames-by-bins matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .signal import Signal

_LOG_FLOOR = 1e-10


@dataclass(frozen=True)
class SpectrogramSpec:
    frame_ms: float = 25.0
    hop_ms: float = 10.0

    def __post_init__(self):
        if self.frame_ms <= 0 or self.hop_ms <= 0:
            raise ParameterError("frame and hop must be positive")
        if self.hop_ms > self.frame_ms:
            raise ParameterError(
                f"hop {self.hop_ms} ms exceeds frame {self.frame_ms} ms"
            )

    def frame_len(self, sample_rate: int) -> int:
        return int(round(self.frame_ms * sample_rate / 1000.0))

    def hop_len(self, sample_rate: int) -> int:
        return int(round(self.hop_ms * sample_rate / 1000.0))

    def fft_size(self, sample_rate: int) -> int:
        n = 1
        while n < self.frame_len(sample_rate):
            n *= 2
        return n


def spectrogram(x: Signal, spec: SpectrogramSpec | None = None) -> np.ndarray:
    """Frames-by-bins matrix of log magnitudes (dB, floored)."""
    spec = spec or SpectrogramSpec()
    frame = spec.frame_len(x.sample_rate)
    hop = spec.hop_len(x.sample_rate)
    if len(x) < frame:
        raise ParameterError(
            f"signal has {len(x)} samples, shorter than one {frame}-sample frame"
        )
    window = np.hanning(frame)
    nfft = spec.fft_size(x.sample_rate)
    n_frames = 1 + (len(x) - frame) // hop
    out = np.empty((n_frames, nfft // 2 + 1))
    for i in range(n_frames):
        segment = x.samples[i * hop : i * hop + frame] * window
        mag = np.abs(np.fft.rfft(segment, nfft))
        out[i] = 20.0 * np.log10(np.maximum(mag, _LOG_FLOOR))
    return out


def bin_frequencies(spec: SpectrogramSpec, sample_rate: int) -> np.ndarray:
    """Center frequency (Hz) of each spectrogram bin."""
    return np.fft.rfftfreq(spec.fft_size(sample_rate), 1.0 / sample_rate)


def write_pgm(matrix: np.ndarray, path):
    """Binary P5 image normalized to [0, 255] over the matrix range.

    Rows are frequency bins with the highest bin on top, columns are
    frames; an all-equal matrix maps to black.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    lo, hi = float(matrix.min()), float(matrix.max())
    if hi > lo:
        scaled = (matrix - lo) / (hi - lo) * 255.0
    else:
        scaled = np.zeros_like(matrix)
    image = np.flipud(np.round(scaled).astype(np.uint8).T)
    height, width = image.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(image.tobytes())


def write_csv(matrix: np.ndarray, path, frequencies: np.ndarray):
    """Row-major CSV: header of bin frequencies, one row per frame."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[1] != len(frequencies):
        raise ParameterError(
            f"matrix has {matrix.shape[1]} bins but {len(frequencies)} "
            "frequencies were given"
        )
    with open(path, "w", encoding="ascii") as fh:
        fh.write(",".join(f"{f:.6f}" for f in frequencies) + "\n")
        for row in matrix:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
