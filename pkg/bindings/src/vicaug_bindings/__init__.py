"""Array-level bindings for the vicaug augmentation engine.

A thin marshaling layer for ML data-loading pipelines that hold waveforms
in memory: plain 1-D float arrays in, plain arrays plus a plain-dict record
out, no file round trips.  Every call delegates to the engine's public API,
so results are bit-identical to calling it directly with the same seed.

Input arrays are defensively copied once on the way in (the engine's signal
type owns an immutable buffer); caller memory is never mutated.  Heavy
computation happens inside numpy/scipy kernels, which release the
interpreter lock.
"""

from __future__ import annotations

import dataclasses

import numpy as np

import vicaug
from vicaug.augment import AugmentConfig, AugmentScheme, apply_scheme
from vicaug.errors import ShapeMismatchError
from vicaug.rng import RngState
from vicaug.signal import Signal
from vicaug.vicinal import VicinalDensity
from vicaug.vicinal import default_density as _default_density
from vicaug.vicinal import sample_vicinal as _sample_vicinal

__version__ = vicaug.__version__

__all__ = ["augment", "sample_vicinal", "__version__"]


def _as_signal(array, sample_rate: int) -> Signal:
    array = np.asarray(array, dtype=np.float64)
    if array.ndim != 1:
        raise ShapeMismatchError(
            f"expected a 1-D sample array, got shape {array.shape}"
        )
    return Signal(array, sample_rate)


def augment(array, sample_rate: int, scheme: str, seed: int, **overrides):
    """Apply one corruption scheme to an in-memory waveform.

    ``scheme`` is one of ``bandlimited``, ``notch``, ``widepass``, ``rir``;
    ``overrides`` are engine config fields (``snr``, ``omega_min``, ...).
    Returns ``(samples, record)`` where ``record`` is a plain dict
    sufficient to replay the draw.
    """
    x = _as_signal(array, sample_rate)
    cfg = AugmentConfig.defaults(AugmentScheme(scheme), **overrides)
    out, record = apply_scheme(x, cfg, RngState(seed))
    return out.samples.copy(), dataclasses.asdict(record)


def sample_vicinal(array, sample_rate: int, m: int, seed: int,
                   density: VicinalDensity | None = None):
    """Draw ``m`` samples from the mixture neighborhood of a waveform.

    With ``density=None`` the engine's stock four-component neighborhood is
    frozen from ``seed``, exactly as the engine's own sampling entry point
    does.  Returns a list of sample arrays.
    """
    x = _as_signal(array, sample_rate)
    rng = RngState(seed)
    if density is None:
        density = _default_density(sample_rate, rng)
    signals, _records = _sample_vicinal(x, density, m, rng)
    return [s.samples.copy() for s in signals]
