"""Parametric FIR filter construction.

Band-pass filters are cosine modulations of a squared Epanechnikov window;
notch filters are the three-tap kind with an exact spectral zero at the
requested dip.  Filter-bank layouts place band centers either uniformly in
Hz or uniformly on the Mel axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError, ParameterError
from .signal import FirFilter

_CAL_REL_TOL = 1e-4


def epanechnikov_window(gamma_w: float, t):
    """Squared Epanechnikov window: ``(1 - gamma*t^2)^2`` for |t| <= 1/sqrt(gamma).

    Total over the reals; returns 0 outside the support.  ``t`` may be a
    scalar or an array of seconds.
    """
    if gamma_w <= 0:
        raise ParameterError(f"window width parameter must be positive, got {gamma_w}")
    t = np.asarray(t, dtype=np.float64)
    inside = np.abs(t) <= 1.0 / np.sqrt(gamma_w)
    out = np.where(inside, (1.0 - gamma_w * t**2) ** 2, 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ParzenFilterSpec:
    """Parameters of one band-pass filter.

    eta: modulation (center) frequency in Hz; gamma_w: window width
    parameter in 1/s^2; support_len: maximum realized tap count.
    """

    eta: float
    gamma_w: float
    support_len: int

    def __post_init__(self):
        if self.eta < 0:
            raise ParameterError(f"modulation frequency must be >= 0, got {self.eta}")
        if self.gamma_w <= 0:
            raise ParameterError(f"gamma must be positive, got {self.gamma_w}")
        if self.support_len < 1:
            raise ParameterError(f"support must be >= 1 sample, got {self.support_len}")


@dataclass(frozen=True)
class FilterBankLayout:
    """Center frequencies and bandwidths (both Hz) of a filter bank."""

    modes: np.ndarray
    bandwidths: np.ndarray

    def __post_init__(self):
        modes = np.array(self.modes, dtype=np.float64).reshape(-1)
        widths = np.array(self.bandwidths, dtype=np.float64).reshape(-1)
        if len(modes) != len(widths):
            raise ParameterError("modes and bandwidths must have equal length")
        if len(modes) == 0:
            raise ParameterError("a layout needs at least one band")
        if np.any(np.diff(modes) <= 0):
            raise ParameterError("modes must be strictly increasing")
        if np.any(widths <= 0):
            raise ParameterError("bandwidths must be positive")
        modes.flags.writeable = False
        widths.flags.writeable = False
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "bandwidths", widths)

    def __len__(self):
        return len(self.modes)


@dataclass(frozen=True)
class NotchSpec:
    """Location (Hz) of the spectral zero of a three-tap notch filter."""

    dip_freq: float


def _window_taps(gamma_w: float, sample_rate: int, support_len: int):
    """Sampled window, symmetric about its middle tap; truncated to support."""
    half_natural = int(np.floor(sample_rate / np.sqrt(gamma_w)))
    n = np.arange(-half_natural, half_natural + 1)
    w = epanechnikov_window(gamma_w, n / sample_rate)
    truncated = False
    if len(w) > support_len:
        # largest odd count that fits keeps the filter exactly symmetric
        keep = support_len if support_len % 2 == 1 else support_len - 1
        cut = (len(w) - keep) // 2
        w = w[cut : cut + keep]
        truncated = True
    return w, truncated


def parzen_filter(spec: ParzenFilterSpec, sample_rate: int) -> FirFilter:
    """Realize ``cos(2*pi*eta*t) * window(t)`` as an FIR filter.

    Taps are sampled at t = n/sample_rate over the window support and
    symmetrically zero-padded up to ``support_len``.  If the natural support
    exceeds ``support_len`` the filter is truncated and flagged.
    """
    if spec.eta >= sample_rate / 2:
        raise ParameterError(
            f"center frequency {spec.eta} Hz reaches Nyquist ({sample_rate / 2} Hz)"
        )
    w, truncated = _window_taps(spec.gamma_w, sample_rate, spec.support_len)
    half = (len(w) - 1) // 2
    n = np.arange(-half, half + 1)
    taps = np.cos(2.0 * np.pi * spec.eta * n / sample_rate) * w
    pad = spec.support_len - len(taps)
    left = pad // 2
    taps = np.pad(taps, (left, pad - left))
    return FirFilter(taps=taps, center=left + half, truncated=truncated)


def _window_width_3db(gamma_w: float, sample_rate: int, support_len: int) -> float:
    """Two-sided -3 dB main-lobe width (Hz) of the realized window.

    The crossing is located by bisection on the directly evaluated spectrum
    (the window is symmetric, so the response is a plain cosine sum); window
    sidelobes sit far below -3 dB, so the first crossing is the only one the
    predicate can land on.
    """
    w, _ = _window_taps(gamma_w, sample_rate, support_len)
    if len(w) < 2:
        return np.inf
    half = (len(w) - 1) // 2
    n = np.arange(-half, half + 1)

    def mag(f):
        return abs(np.dot(w, np.cos(2.0 * np.pi * f * n / sample_rate)))

    target = mag(0.0) / np.sqrt(2.0)
    nyquist = sample_rate / 2.0
    f_hi = sample_rate / (8.0 * len(w))
    while mag(f_hi) >= target:
        f_hi *= 2.0
        if f_hi >= nyquist:
            if mag(nyquist) >= target:
                return np.inf
            f_hi = nyquist
            break
    lo, hi = 0.0, f_hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mag(mid) < target:
            hi = mid
        else:
            lo = mid
    return 2.0 * 0.5 * (lo + hi)


def bandwidth_to_gamma(xi: float, sample_rate: int, support_len: int) -> float:
    """Window width parameter whose -3 dB main lobe spans ``xi`` Hz.

    Found by bisection over gamma; the realized width is strictly monotone
    in gamma between the widest window the support can hold and the
    three-tap limit.  Raises if ``xi`` falls outside that range.
    """
    if xi <= 0:
        raise ParameterError(f"bandwidth must be positive, got {xi}")
    # widest realizable window: gamma -> 0 degenerates to a support-long
    # rectangle; narrowest: three taps (half-width one sample).
    gamma_lo = 1e-2
    gamma_hi = float(sample_rate) ** 2
    while _window_width_3db(gamma_hi, sample_rate, support_len) == np.inf:
        gamma_hi /= 2.0
    w_lo = _window_width_3db(gamma_lo, sample_rate, support_len)
    w_hi = _window_width_3db(gamma_hi, sample_rate, support_len)
    if not w_lo <= xi <= w_hi:
        raise CalibrationError(
            f"bandwidth {xi} Hz not realizable with {support_len} taps at "
            f"{sample_rate} Hz (achievable range [{w_lo:.2f}, {w_hi:.2f}] Hz)"
        )
    lo, hi = np.log(gamma_lo), np.log(gamma_hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        width = _window_width_3db(float(np.exp(mid)), sample_rate, support_len)
        if width < xi:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    gamma = float(np.exp(0.5 * (lo + hi)))
    achieved = _window_width_3db(gamma, sample_rate, support_len)
    if abs(achieved - xi) > _CAL_REL_TOL * xi:
        raise CalibrationError(
            f"calibration for {xi} Hz converged to {achieved:.4f} Hz"
        )
    return gamma


def evenly_spaced_modes(
    omega_min: float, omega_max: float, sample_rate: int, p: int
) -> FilterBankLayout:
    """p equal bands tiling [omega_min, omega_max], centers mid-band.

    ``omega_i = omega_min + (i - 1/2) * delta`` with ``delta`` the common
    bandwidth, so the bands jointly cover the range exactly.
    """
    _check_band_range(omega_min, omega_max, sample_rate, p)
    delta = (omega_max - omega_min) / p
    modes = omega_min + (np.arange(1, p + 1) - 0.5) * delta
    return FilterBankLayout(modes=modes, bandwidths=np.full(p, delta))


def mel_hz_to_mel(nu):
    """Perceptual frequency warp: mel = 2595*log10(1 + hz/700)."""
    return 2595.0 * np.log10(1.0 + np.asarray(nu, dtype=np.float64) / 700.0)


def mel_mel_to_hz(m):
    """Inverse of :func:`mel_hz_to_mel`."""
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_wide_bandwidths(
    omega_min: float, omega_max: float, sample_rate: int, p: int
) -> FilterBankLayout:
    """p bands tiling [omega_min, omega_max] on the Mel axis.

    Centers are evenly spaced in mel; each bandwidth is the Hz width of its
    mel band, so widths grow with center frequency and sum telescopes to
    ``omega_max - omega_min``.
    """
    _check_band_range(omega_min, omega_max, sample_rate, p)
    m_lo, m_hi = mel_hz_to_mel(omega_min), mel_hz_to_mel(omega_max)
    dm = (m_hi - m_lo) / p
    centers_mel = m_lo + (np.arange(1, p + 1) - 0.5) * dm
    modes = mel_mel_to_hz(centers_mel)
    widths = mel_mel_to_hz(centers_mel + dm / 2) - mel_mel_to_hz(centers_mel - dm / 2)
    return FilterBankLayout(modes=modes, bandwidths=widths)


def _check_band_range(omega_min, omega_max, sample_rate, p):
    nyquist = sample_rate / 2
    if not 0 < omega_min < omega_max:
        raise ParameterError(
            f"need 0 < omega_min < omega_max, got [{omega_min}, {omega_max}]"
        )
    # omega_max may sit exactly at Nyquist: band centers stay strictly below.
    if omega_max > nyquist:
        raise ParameterError(
            f"omega_max {omega_max} Hz exceeds Nyquist ({nyquist} Hz)"
        )
    if p < 1:
        raise ParameterError(f"band count must be >= 1, got {p}")


def notch_filter(spec: NotchSpec, sample_rate: int) -> FirFilter:
    """Three-tap filter [1, -2*cos(2*pi*dip/f), 1] with an exact zero at dip."""
    nyquist = sample_rate / 2
    if not 0 <= spec.dip_freq <= nyquist:
        raise ParameterError(
            f"dip {spec.dip_freq} Hz outside [0, {nyquist}] Hz (Nyquist)"
        )
    omega = 2.0 * np.pi * spec.dip_freq / sample_rate
    return FirFilter(taps=np.array([1.0, -2.0 * np.cos(omega), 1.0]), center=1)


def frequency_response(h: FirFilter, freq, sample_rate: int):
    """Complex response ``sum_k taps[k] * exp(-j*2*pi*f*(k - center)/f_s)``.

    ``freq`` may be a scalar or an array; all values must lie in
    [0, Nyquist].
    """
    freq_arr = np.asarray(freq, dtype=np.float64)
    nyquist = sample_rate / 2
    if np.any(freq_arr < 0) or np.any(freq_arr > nyquist):
        raise ParameterError(f"frequency outside [0, {nyquist}] Hz")
    k = np.arange(len(h.taps)) - h.center
    phase = np.exp(
        -2j * np.pi * np.multiply.outer(freq_arr, k) / sample_rate
    )
    out = phase @ h.taps
    return complex(out) if out.ndim == 0 else out


def format_taps(h: FirFilter) -> str:
    """Plain-text export: one full-precision decimal coefficient per line."""
    return "\n".join(repr(float(t)) for t in h.taps)
