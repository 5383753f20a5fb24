"""Shoebox room impulse responses via the image-source method.

Mirror images of the source are enumerated across the six walls up to a
reflection-order cap; each image contributes an attenuated impulse at its
propagation delay, placed with two-tap linear interpolation.  Absorption is
frequency-independent per material and shared by all walls.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import GeometryError, MaterialLookupError, ParameterError
from .rng import RngState
from .signal import Signal

SPEED_OF_SOUND = 343.0

# Tail arrivals are dropped once the remaining reflection energy falls this
# far below the direct path.
_TAIL_CUTOFF_DB = -60.0

_MAX_PLACEMENT_ATTEMPTS = 10_000
_DIRECTION_DRAWS_PER_MIC = 100


def _normalize_material(name: str) -> str:
    return name.strip().lower().replace(" ", "_")


def load_materials(path) -> dict:
    """Material registry from a JSON file mapping name -> absorption."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    registry = {}
    for name, alpha in raw.items():
        alpha = float(alpha)
        if not 0.0 < alpha <= 1.0:
            raise ParameterError(
                f"absorption for {name!r} must be in (0, 1], got {alpha}"
            )
        registry[_normalize_material(name)] = alpha
    return registry


def default_materials() -> dict:
    """The shipped wall-material registry."""
    text = resources.files("vicaug").joinpath("data/materials.json").read_text()
    return {_normalize_material(k): float(v) for k, v in json.loads(text).items()}


def material_absorption(name: str, registry: dict | None = None) -> float:
    """Absorption coefficient of a named wall material."""
    registry = default_materials() if registry is None else registry
    key = _normalize_material(name)
    if key not in registry:
        known = ", ".join(sorted(registry))
        raise MaterialLookupError(f"unknown material {name!r} (known: {known})")
    return registry[key]


@dataclass(frozen=True)
class RoomConfig:
    """A shoebox room with a single wall material."""

    dims: tuple
    material: str
    absorption: float
    max_order: int = 8
    speed_of_sound: float = SPEED_OF_SOUND

    def __post_init__(self):
        dims = tuple(float(d) for d in self.dims)
        if len(dims) != 3 or any(d <= 0 for d in dims):
            raise ParameterError(f"room dims must be 3 positive lengths, got {self.dims}")
        if not 0.0 < self.absorption <= 1.0:
            raise ParameterError(
                f"absorption must be in (0, 1], got {self.absorption}"
            )
        if self.max_order < 0:
            raise ParameterError(f"max_order must be >= 0, got {self.max_order}")
        if self.speed_of_sound <= 0:
            raise ParameterError("speed of sound must be positive")
        object.__setattr__(self, "dims", dims)

    def diagonal(self) -> float:
        return float(np.linalg.norm(self.dims))


@dataclass(frozen=True)
class SourceMicGeometry:
    """Microphone and source positions (meters) and their distance."""

    mic: np.ndarray
    source: np.ndarray
    distance: float

    def __post_init__(self):
        mic = np.array(self.mic, dtype=np.float64).reshape(3)
        source = np.array(self.source, dtype=np.float64).reshape(3)
        actual = float(np.linalg.norm(source - mic))
        if abs(actual - self.distance) > 1e-9:
            raise ParameterError(
                f"|source - mic| = {actual} does not match distance {self.distance}"
            )
        mic.flags.writeable = False
        source.flags.writeable = False
        object.__setattr__(self, "mic", mic)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "distance", float(self.distance))


def _inside(point: np.ndarray, dims) -> bool:
    return bool(np.all(point > 0.0) and np.all(point < np.asarray(dims)))


def sample_geometry(
    room: RoomConfig, d_min: float, d_max: float, rng: RngState
) -> SourceMicGeometry:
    """Random mic position and source at a uniform distance on its sphere.

    The mic is uniform in the room, the distance uniform in [d_min, d_max],
    and the source uniform on the sphere of that radius, rejection-sampled
    until it lands strictly inside the room.  After every 100 failed
    direction draws the mic and distance are redrawn together (a distance
    near the room diagonal is only feasible from a corner, so pinning it
    would deadlock on legal inputs).
    """
    if not 0 < d_min <= d_max:
        raise ParameterError(f"need 0 < d_min <= d_max, got [{d_min}, {d_max}]")
    if d_max >= room.diagonal():
        raise GeometryError(
            f"distance {d_max} m cannot fit in a room with diagonal "
            f"{room.diagonal():.3f} m"
        )
    dims = np.asarray(room.dims)
    attempts = 0
    while True:
        mic = np.array([rng.uniform(0.0, dim) for dim in dims])
        d = rng.uniform(d_min, d_max)
        for _ in range(_DIRECTION_DRAWS_PER_MIC):
            attempts += 1
            if attempts > _MAX_PLACEMENT_ATTEMPTS:
                raise GeometryError(
                    f"no source placement found after {_MAX_PLACEMENT_ATTEMPTS} "
                    f"attempts (room {room.dims}, distances [{d_min}, {d_max}] m)"
                )
            direction = rng.standard_normal(3)
            norm = np.linalg.norm(direction)
            if norm == 0.0:
                continue
            source = mic + d * direction / norm
            if _inside(source, dims):
                return SourceMicGeometry(mic=mic, source=source, distance=d)


def image_source_arrivals(room: RoomConfig, geo: SourceMicGeometry):
    """All image-source arrivals up to ``max_order`` reflections.

    Returns ``(delays, amplitudes, orders)`` sorted by delay.  Amplitudes
    follow ``sqrt(1 - alpha)^order / (4*pi*dist)``; zero-amplitude arrivals
    (fully absorbed) are dropped.
    """
    order_cap = room.max_order
    reflection = np.sqrt(1.0 - room.absorption)
    per_axis = []
    m_span = order_cap // 2 + 1
    for axis in range(3):
        length = room.dims[axis]
        src = geo.source[axis]
        offsets, counts = [], []
        for u in (0, 1):
            for m in range(-m_span, m_span + 1):
                n_refl = abs(2 * m - u)
                if n_refl > order_cap:
                    continue
                offsets.append((-src if u else src) + 2.0 * m * length)
                counts.append(n_refl)
        per_axis.append((np.array(offsets), np.array(counts)))

    ox, cx = per_axis[0]
    oy, cy = per_axis[1]
    oz, cz = per_axis[2]
    orders = (
        cx[:, None, None] + cy[None, :, None] + cz[None, None, :]
    )
    keep = orders <= order_cap
    dx = ox[:, None, None] - geo.mic[0]
    dy = oy[None, :, None] - geo.mic[1]
    dz = oz[None, None, :] - geo.mic[2]
    dist = np.sqrt(
        np.broadcast_to(dx, orders.shape) ** 2
        + np.broadcast_to(dy, orders.shape) ** 2
        + np.broadcast_to(dz, orders.shape) ** 2
    )
    dist = dist[keep]
    orders = orders[keep]
    amps = reflection**orders / (4.0 * np.pi * dist)
    nonzero = amps > 0.0
    dist, orders, amps = dist[nonzero], orders[nonzero], amps[nonzero]
    delays = dist / room.speed_of_sound
    idx = np.argsort(delays, kind="stable")
    return delays[idx], amps[idx], orders[idx]


def image_source_rir(room: RoomConfig, geo: SourceMicGeometry, sample_rate: int) -> Signal:
    """Room impulse response at ``sample_rate``; deterministic in its inputs.

    Each arrival is spread over the two nearest samples by linear
    interpolation; the tail is truncated once the residual energy drops 60
    dB below the direct path.
    """
    delays, amps, _ = image_source_arrivals(room, geo)
    direct_energy = amps[0] ** 2
    tail_energy = np.cumsum((amps**2)[::-1])[::-1]
    keep = tail_energy >= direct_energy * 10.0 ** (_TAIL_CUTOFF_DB / 10.0)
    delays, amps = delays[keep], amps[keep]

    positions = delays * sample_rate
    base = np.floor(positions).astype(np.int64)
    frac = positions - base
    length = int(base[-1]) + 2
    rir = np.zeros(length)
    np.add.at(rir, base, amps * (1.0 - frac))
    np.add.at(rir, base + 1, amps * frac)
    return Signal(rir, sample_rate)


def direct_path_index(geo: SourceMicGeometry, sample_rate: int, speed_of_sound: float = SPEED_OF_SOUND) -> int:
    """Nearest sample index of the line-of-sight arrival."""
    return int(round(geo.distance / speed_of_sound * sample_rate))


def schroeder_curve(rir: Signal) -> np.ndarray:
    """Backward-integrated energy of an impulse response."""
    energy = rir.samples**2
    return np.cumsum(energy[::-1])[::-1]
