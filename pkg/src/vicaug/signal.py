"""Core signal primitives: waveforms, FIR filters, convolution, SNR mixing.

All operations are pure: they never mutate their inputs and stochastic ones
take an explicit :class:`~vicaug.rng.RngState`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .errors import (
    DegenerateSignalError,
    EmptyInputError,
    ParameterError,
    ShapeMismatchError,
)
from .rng import RngState

# Direct convolution below this tap count, FFT overlap-add above.  Both
# paths agree to 1e-9 relative, so the value is not observable.
FFT_TAP_THRESHOLD = 64


@dataclass(frozen=True)
class Signal:
    """A mono waveform: finite float64 samples at a fixed sample rate (Hz)."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64, copy=True).reshape(-1)
        if not np.all(np.isfinite(samples)):
            raise ParameterError("signal samples must be finite (no NaN/Inf)")
        sr = int(self.sample_rate)
        if sr <= 0:
            raise ParameterError(f"sample rate must be positive, got {self.sample_rate}")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", sr)

    def __len__(self):
        return len(self.samples)

    def power(self) -> float:
        """Mean of squared samples over the full signal."""
        if len(self) == 0:
            raise EmptyInputError("power of an empty signal is undefined")
        return float(np.mean(self.samples**2))


@dataclass(frozen=True)
class FirFilter:
    """A finite tap sequence whose ``center`` index marks the time-zero tap."""

    taps: np.ndarray
    center: int
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self):
        taps = np.array(self.taps, dtype=np.float64, copy=True).reshape(-1)
        if len(taps) == 0:
            raise EmptyInputError("a filter needs at least one tap")
        if not np.all(np.isfinite(taps)):
            raise ParameterError("filter taps must be finite")
        center = int(self.center)
        if not 0 <= center < len(taps):
            raise ParameterError(
                f"center {center} outside tap range [0, {len(taps)})"
            )
        taps.flags.writeable = False
        object.__setattr__(self, "taps", taps)
        object.__setattr__(self, "center", center)

    def __len__(self):
        return len(self.taps)


def unit_impulse() -> FirFilter:
    """The identity filter."""
    return FirFilter(taps=np.array([1.0]), center=0)


def white_noise(n: int, rng: RngState, sample_rate: int) -> Signal:
    """n i.i.d. standard-normal samples at the caller's sample rate."""
    if n < 1:
        raise EmptyInputError(f"noise length must be >= 1, got {n}")
    return Signal(rng.standard_normal(n), sample_rate)


def convolve_same(x: Signal, h: FirFilter) -> Signal:
    """Linear convolution evaluated at the input's own time axis.

    ``out[i] = sum_k taps[k] * x[i + center - k]`` with out-of-range input
    treated as zero, so the output has exactly the input's length and the
    filter's center tap stays aligned with each output sample.  A direct
    sum is used for short filters and FFT overlap-add for long ones.
    """
    if len(x) == 0:
        raise EmptyInputError("cannot convolve an empty signal")
    if len(h) <= FFT_TAP_THRESHOLD:
        full = np.convolve(x.samples, h.taps)
    else:
        full = scipy.signal.oaconvolve(x.samples, h.taps)
    out = full[h.center : h.center + len(x)]
    return Signal(out, x.sample_rate)


def circular_convolve(x: Signal, h: FirFilter) -> Signal:
    """Circular convolution: multiplication by the circulant matrix of ``h``.

    ``out[i] = sum_k taps[k] * x[(i + center - k) mod n]``; requires the tap
    count not to exceed the signal length.
    """
    n = len(x)
    if n == 0:
        raise EmptyInputError("cannot convolve an empty signal")
    if len(h) > n:
        raise ShapeMismatchError(
            f"filter has {len(h)} taps but the signal only {n} samples"
        )
    kernel = np.zeros(n)
    for k, tap in enumerate(h.taps):
        kernel[(k - h.center) % n] += tap
    out = np.fft.irfft(np.fft.rfft(x.samples) * np.fft.rfft(kernel), n)
    return Signal(out, x.sample_rate)


def _check_pair(a: Signal, b: Signal):
    if len(a) != len(b):
        raise ShapeMismatchError(f"signal lengths differ: {len(a)} vs {len(b)}")
    if a.sample_rate != b.sample_rate:
        raise ShapeMismatchError(
            f"sample rates differ: {a.sample_rate} vs {b.sample_rate}"
        )


def snr_scale_factor(noise: Signal, reference: Signal, gamma_db: float) -> float:
    """Scale for ``noise`` so that SNR(reference, scaled noise) = gamma_db."""
    _check_pair(noise, reference)
    p_ref = reference.power()
    p_noise = noise.power()
    if p_ref == 0.0:
        raise DegenerateSignalError("reference signal has zero power")
    if p_noise == 0.0:
        raise DegenerateSignalError("noise signal has zero power")
    return float(np.sqrt(p_ref / (p_noise * 10.0 ** (gamma_db / 10.0))))


def snr_scale(noise: Signal, reference: Signal, gamma_db: float) -> Signal:
    """Rescale ``noise`` to sit gamma_db decibels below ``reference``."""
    s = snr_scale_factor(noise, reference, gamma_db)
    return Signal(noise.samples * s, noise.sample_rate)


def measure_snr(clean: Signal, noise: Signal) -> float:
    """10*log10 of the power ratio between ``clean`` and ``noise``, in dB."""
    _check_pair(clean, noise)
    p_clean = clean.power()
    p_noise = noise.power()
    if p_clean == 0.0:
        raise DegenerateSignalError("clean signal has zero power")
    if p_noise == 0.0:
        raise DegenerateSignalError("noise signal has zero power")
    return float(10.0 * np.log10(p_clean / p_noise))
