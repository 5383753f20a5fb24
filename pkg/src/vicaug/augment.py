"""The four waveform augmentation schemes as seeded, replayable transforms.

Each scheme draws its structural parameters (band, dip, or room geometry)
and an SNR from an explicit random stream, applies a linear filter to the
input and/or the injected white noise, and returns the corrupted signal
together with an :class:`AugmentRecord` that is sufficient to reproduce the
output bit-exactly.

Draw order is part of the reproducibility contract and is documented on
each scheme: structural draws first, then one fresh noise seed, then the
SNR value.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyInputError, ParameterError, ShapeMismatchError
from .filters import (
    NotchSpec,
    ParzenFilterSpec,
    bandwidth_to_gamma,
    evenly_spaced_modes,
    mel_wide_bandwidths,
    notch_filter,
    parzen_filter,
)
from .rng import RngState
from .room import (
    RoomConfig,
    SourceMicGeometry,
    direct_path_index,
    image_source_rir,
    material_absorption,
    sample_geometry,
)
from .signal import FirFilter, Signal, convolve_same, snr_scale_factor, white_noise

DEFAULT_ROOMS = ((4.0, 4.0, 2.5), (10.0, 10.0, 3.5), (2.5, 1.5, 1.5))
DEFAULT_MATERIALS = (
    "hard_surface",
    "marble_floor",
    "wooden_door",
    "glass_window",
    "hairy_carpet",
)


class AugmentScheme(str, Enum):
    BANDLIMITED = "bandlimited"
    NOTCH = "notch"
    WIDEPASS = "widepass"
    RIR = "rir"


@dataclass(frozen=True)
class SnrRange:
    """Signal-to-noise range in decibels for the injected white noise."""

    gamma_min: float = 8.0
    gamma_max: float = 32.0

    def __post_init__(self):
        if self.gamma_min > self.gamma_max:
            raise ParameterError(
                f"SNR range is empty: [{self.gamma_min}, {self.gamma_max}] dB"
            )

    def draw(self, rng: RngState) -> float:
        return rng.uniform(self.gamma_min, self.gamma_max)


@dataclass
class AugmentConfig:
    """Parameters of one augmentation scheme.

    Frequency fields apply to the filter-bank schemes, room fields to the
    reverberation scheme; ``support_len`` defaults to ``support_ms`` worth
    of samples at the signal's rate.
    """

    scheme: AugmentScheme
    omega_min: float | None = None
    omega_max: float | None = None
    p: int = 8
    support_len: int | None = None
    support_ms: float = 25.0
    snr: SnrRange = field(default_factory=SnrRange)
    rooms: tuple = DEFAULT_ROOMS
    materials: tuple = DEFAULT_MATERIALS
    material_registry: dict | None = None
    d_min: float = 0.03
    d_max: float = 3.0
    max_order: int = 8

    @classmethod
    def defaults(cls, scheme, **overrides) -> "AugmentConfig":
        """Stock configuration for a scheme (low band 50-800 Hz, high notch
        range 5-8 kHz, wide Mel bands 50-7950 Hz, three rooms with five
        materials, SNR 8-32 dB)."""
        scheme = AugmentScheme(scheme)
        ranges = {
            AugmentScheme.BANDLIMITED: (50.0, 800.0),
            AugmentScheme.NOTCH: (5000.0, 8000.0),
            AugmentScheme.WIDEPASS: (50.0, 7950.0),
            AugmentScheme.RIR: (None, None),
        }
        omega_min, omega_max = ranges[scheme]
        cfg = cls(scheme=scheme, omega_min=omega_min, omega_max=omega_max)
        for key, value in overrides.items():
            if not hasattr(cfg, key):
                raise ParameterError(f"unknown config field {key!r}")
            setattr(cfg, key, value)
        return cfg

    def resolve_support(self, sample_rate: int) -> int:
        if self.support_len is not None:
            return int(self.support_len)
        return int(round(self.support_ms * sample_rate / 1000.0))


@dataclass(frozen=True)
class FrozenTransform:
    """The deterministic (noise-free) part of one augmentation draw.

    ``signal_filters`` are applied to the input in sequence;
    ``noise_filter``, when present, shapes the injected white noise instead.
    """

    scheme: AugmentScheme
    params: dict
    signal_filters: tuple = ()
    noise_filter: FirFilter | None = None

    def __call__(self, x: Signal) -> Signal:
        for fir in self.signal_filters:
            x = convolve_same(x, fir)
        return x


@dataclass
class AugmentRecord:
    """Replay log of one augmentation: drawn parameters, SNR, and seeds.

    ``params`` holds the scheme's structural draw (band, dip, or room
    geometry) plus the realized ``noise_scale`` so replay is exactly the
    affine map ``x -> filter(x) + noise_scale * noise``.
    """

    scheme: str
    sample_rate: int
    params: dict = field(default_factory=dict)
    gamma_db: float | None = None
    noise_seed: int | None = None
    noise_scale: float | None = None
    seed: int | None = None
    stream: int | None = None
    snr_reference: str = "filtered"

    _HEAD = ("scheme", "sample_rate", "seed", "stream", "gamma_db",
             "noise_seed", "noise_scale", "snr_reference")

    def to_line(self) -> str:
        """Single-line key=value serialization (space-separated)."""
        parts = []
        for key in self._HEAD:
            value = getattr(self, key)
            if value is not None:
                parts.append(f"{key}={_format_value(value)}")
        for key in sorted(self.params):
            parts.append(f"{key}={_format_value(self.params[key])}")
        return " ".join(parts)

    @classmethod
    def from_line(cls, line: str) -> "AugmentRecord":
        fields = {}
        for token in line.split():
            if "=" not in token:
                raise ParameterError(f"malformed record token {token!r}")
            key, raw = token.split("=", 1)
            fields[key] = _parse_value(raw)
        head = {k: fields.pop(k) for k in list(fields) if k in cls._HEAD}
        if "scheme" not in head or "sample_rate" not in head:
            raise ParameterError("record line lacks scheme/sample_rate")
        return cls(params=fields, **head)


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, (tuple, list, np.ndarray)):
        return ",".join(repr(float(v)) for v in value)
    return str(value)


def _parse_value(raw: str):
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    if "," in raw:
        return tuple(float(part) for part in raw.split(","))
    return raw


@functools.lru_cache(maxsize=256)
def _cached_gamma(xi: float, sample_rate: int, support_len: int) -> float:
    return bandwidth_to_gamma(xi, sample_rate, support_len)


def _check_band_config(cfg: AugmentConfig, sample_rate: int):
    nyquist = sample_rate / 2
    if cfg.omega_min is None or cfg.omega_max is None:
        raise ParameterError(f"scheme {cfg.scheme.value} needs a frequency range")
    if cfg.omega_max > nyquist:
        raise ParameterError(
            f"omega_max {cfg.omega_max} Hz exceeds Nyquist ({nyquist} Hz) "
            f"at {sample_rate} Hz"
        )


def draw_transform(cfg: AugmentConfig, sample_rate: int, rng: RngState) -> FrozenTransform:
    """Draw a scheme's structural parameters and freeze them as filters.

    Consumes, in order: one band/dip index for the filter-bank schemes, or
    room index, material index, and geometry draws for the reverberation
    scheme.
    """
    scheme = AugmentScheme(cfg.scheme)
    if scheme in (AugmentScheme.BANDLIMITED, AugmentScheme.WIDEPASS):
        _check_band_config(cfg, sample_rate)
        support = cfg.resolve_support(sample_rate)
        if scheme is AugmentScheme.BANDLIMITED:
            layout = evenly_spaced_modes(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p)
        else:
            layout = mel_wide_bandwidths(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p)
        index = rng.integers(len(layout))
        omega = float(layout.modes[index])
        xi = float(layout.bandwidths[index])
        gamma_w = _cached_gamma(xi, sample_rate, support)
        fir = parzen_filter(ParzenFilterSpec(omega, gamma_w, support), sample_rate)
        params = {
            "band_index": index,
            "omega": omega,
            "xi": xi,
            "gamma_w": gamma_w,
            "support_len": support,
        }
        if scheme is AugmentScheme.BANDLIMITED:
            return FrozenTransform(scheme, params, noise_filter=fir)
        return FrozenTransform(scheme, params, signal_filters=(fir,))

    if scheme is AugmentScheme.NOTCH:
        _check_band_config(cfg, sample_rate)
        layout = evenly_spaced_modes(cfg.omega_min, cfg.omega_max, sample_rate, cfg.p)
        index = rng.integers(len(layout))
        dip = float(layout.modes[index])
        h_zero = notch_filter(NotchSpec(0.0), sample_rate)
        h_dip = notch_filter(NotchSpec(dip), sample_rate)
        params = {"dip_index": index, "dip_hz": dip}
        return FrozenTransform(scheme, params, signal_filters=(h_zero, h_dip))

    if scheme is AugmentScheme.RIR:
        room_index = rng.integers(len(cfg.rooms))
        material_index = rng.integers(len(cfg.materials))
        material = cfg.materials[material_index]
        alpha = material_absorption(material, cfg.material_registry)
        room = RoomConfig(
            dims=cfg.rooms[room_index],
            material=material,
            absorption=alpha,
            max_order=cfg.max_order,
        )
        geo = sample_geometry(room, cfg.d_min, cfg.d_max, rng)
        return _freeze_rir(room, geo, sample_rate)

    raise ParameterError(f"unknown scheme {cfg.scheme!r}")


def _freeze_rir(room: RoomConfig, geo: SourceMicGeometry, sample_rate: int) -> FrozenTransform:
    rir = image_source_rir(room, geo, sample_rate)
    center = min(direct_path_index(geo, sample_rate, room.speed_of_sound), len(rir) - 1)
    fir = FirFilter(taps=rir.samples, center=center)
    params = {
        "room": room.dims,
        "material": room.material,
        "alpha": room.absorption,
        "max_order": room.max_order,
        "mic": tuple(geo.mic),
        "source": tuple(geo.source),
        "distance": geo.distance,
        "rir_center": center,
    }
    return FrozenTransform(AugmentScheme.RIR, params, signal_filters=(fir,))


def _transform_from_params(scheme: AugmentScheme, params: dict, sample_rate: int) -> FrozenTransform:
    """Rebuild the frozen filters of a recorded draw (deterministic)."""
    if scheme in (AugmentScheme.BANDLIMITED, AugmentScheme.WIDEPASS):
        spec = ParzenFilterSpec(
            eta=params["omega"],
            gamma_w=params["gamma_w"],
            support_len=int(params["support_len"]),
        )
        fir = parzen_filter(spec, sample_rate)
        if scheme is AugmentScheme.BANDLIMITED:
            return FrozenTransform(scheme, params, noise_filter=fir)
        return FrozenTransform(scheme, params, signal_filters=(fir,))
    if scheme is AugmentScheme.NOTCH:
        h_zero = notch_filter(NotchSpec(0.0), sample_rate)
        h_dip = notch_filter(NotchSpec(params["dip_hz"]), sample_rate)
        return FrozenTransform(scheme, params, signal_filters=(h_zero, h_dip))
    if scheme is AugmentScheme.RIR:
        room = RoomConfig(
            dims=params["room"],
            material=str(params["material"]),
            absorption=params["alpha"],
            max_order=int(params["max_order"]),
        )
        geo = SourceMicGeometry(
            mic=np.array(params["mic"]),
            source=np.array(params["source"]),
            distance=params["distance"],
        )
        rir = image_source_rir(room, geo, sample_rate)
        fir = FirFilter(taps=rir.samples, center=int(params["rir_center"]))
        return FrozenTransform(scheme, params, signal_filters=(fir,))
    raise ParameterError(f"unknown scheme {scheme!r}")


def apply_scheme(x: Signal, cfg: AugmentConfig, rng: RngState):
    """Run one augmentation draw; returns ``(augmented, record)``.

    After the structural draw the stream supplies one fresh noise seed and
    one SNR value; the white noise is generated from its own seed so the
    record alone can regenerate it.
    """
    if len(x) == 0:
        raise EmptyInputError("cannot augment an empty signal")
    transform = draw_transform(cfg, x.sample_rate, rng)
    noise_seed = rng.draw_seed()
    gamma_db = cfg.snr.draw(rng)

    z = transform(x)
    noise = white_noise(len(x), RngState(noise_seed), x.sample_rate)
    if transform.noise_filter is not None:
        noise = convolve_same(noise, transform.noise_filter)
    scale = snr_scale_factor(noise, z, gamma_db)

    out = Signal(z.samples + scale * noise.samples, x.sample_rate)
    record = AugmentRecord(
        scheme=transform.scheme.value,
        sample_rate=x.sample_rate,
        params=dict(transform.params),
        gamma_db=gamma_db,
        noise_seed=noise_seed,
        noise_scale=scale,
        seed=rng.seed,
        stream=rng.stream,
    )
    return out, record


def band_limited_white_noise(x: Signal, cfg: AugmentConfig | None, rng: RngState):
    """Add white noise confined to a randomly drawn low-frequency band.

    The input itself is left untouched; the noise passes through one filter
    of an evenly spaced band-pass bank before SNR scaling.
    """
    return apply_scheme(x, _coerce(cfg, AugmentScheme.BANDLIMITED), rng)


def noisy_double_dip_notch(x: Signal, cfg: AugmentConfig | None, rng: RngState):
    """Notch the signal at DC and at a drawn high frequency, add white noise.

    The two three-tap notch filters are applied in sequence, then full-band
    white noise is mixed in at the drawn SNR against the filtered signal.
    """
    return apply_scheme(x, _coerce(cfg, AugmentScheme.NOTCH), rng)


def noisy_widepass(x: Signal, cfg: AugmentConfig | None, rng: RngState):
    """Keep one wide Mel-spaced band of the signal, add full-band noise."""
    return apply_scheme(x, _coerce(cfg, AugmentScheme.WIDEPASS), rng)


def noisy_rir(x: Signal, cfg: AugmentConfig | None, rng: RngState):
    """Convolve with a sampled room impulse response, add full-band noise.

    The room, wall material, and source/mic geometry are drawn uniformly;
    the convolution is aligned on the direct-path tap so the output stays
    label-aligned with the input.
    """
    return apply_scheme(x, _coerce(cfg, AugmentScheme.RIR), rng)


def _coerce(cfg: AugmentConfig | None, scheme: AugmentScheme) -> AugmentConfig:
    if cfg is None:
        return AugmentConfig.defaults(scheme)
    if AugmentScheme(cfg.scheme) is not scheme:
        raise ParameterError(
            f"config is for scheme {cfg.scheme!r}, expected {scheme.value!r}"
        )
    return cfg


def replay(x: Signal, record: AugmentRecord) -> Signal:
    """Re-apply a recorded augmentation to ``x``; bit-exact on the original.

    With the drawn parameters frozen this is the affine map
    ``x -> filter(x) + noise_scale * noise(noise_seed)``.
    """
    if record.scheme == "identity":
        return x
    if x.sample_rate != record.sample_rate:
        raise ShapeMismatchError(
            f"signal rate {x.sample_rate} != record rate {record.sample_rate}"
        )
    scheme = AugmentScheme(record.scheme)
    transform = _transform_from_params(scheme, record.params, record.sample_rate)
    z = transform(x)
    noise = white_noise(len(x), RngState(record.noise_seed), x.sample_rate)
    if transform.noise_filter is not None:
        noise = convolve_same(noise, transform.noise_filter)
    return Signal(z.samples + record.noise_scale * noise.samples, x.sample_rate)


def replay_clean(x: Signal, record: AugmentRecord) -> Signal:
    """The filtered-but-noise-free signal ``z`` of a recorded augmentation."""
    if record.scheme == "identity":
        return x
    if x.sample_rate != record.sample_rate:
        raise ShapeMismatchError(
            f"signal rate {x.sample_rate} != record rate {record.sample_rate}"
        )
    scheme = AugmentScheme(record.scheme)
    transform = _transform_from_params(scheme, record.params, record.sample_rate)
    return transform(x)
