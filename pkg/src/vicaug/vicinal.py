"""Vicinal sampling: Gaussian-mixture neighborhoods around a waveform.

A neighborhood is a uniform mixture of components, each pairing a frozen
deterministic transform (an augmentation draw, or identity) with a Gaussian
noise scale.  The scale can be given directly in amplitude units or as an
SNR range resolved against the transformed signal at draw time.  On top of
the sampler sit the keep-or-perturb training policy, the prediction
smoother, and the sampled negative log-likelihood objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .augment import (
    AugmentConfig,
    AugmentRecord,
    AugmentScheme,
    SnrRange,
    apply_scheme,
    draw_transform,
)
from .errors import EvaluationError, ParameterError, ShapeMismatchError
from .rng import RngState
from .signal import Signal

_PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class VicinalComponent:
    """One mixture component: a frozen transform plus a noise scale.

    ``transform`` must preserve signal length; ``None`` means identity.
    Exactly one of ``sigma`` (amplitude units, >= 0) and ``snr`` (resolved
    against the transformed signal at draw time) must be given.
    """

    transform: Callable[[Signal], Signal] | None = None
    sigma: float | None = None
    snr: SnrRange | None = None

    def __post_init__(self):
        if (self.sigma is None) == (self.snr is None):
            raise ParameterError("give exactly one of sigma or snr")
        if self.sigma is not None and self.sigma < 0:
            raise ParameterError(f"sigma must be >= 0, got {self.sigma}")

    def mean(self, x: Signal) -> Signal:
        z = x if self.transform is None else self.transform(x)
        if len(z) != len(x):
            raise ShapeMismatchError(
                f"component transform changed length {len(x)} -> {len(z)}"
            )
        return z

    def resolve_sigma(self, z: Signal, rng: RngState):
        """Noise scale for one draw; returns (sigma, gamma_db_or_None)."""
        if self.sigma is not None:
            return float(self.sigma), None
        gamma = self.snr.draw(rng)
        return float(np.sqrt(z.power() * 10.0 ** (-gamma / 10.0))), gamma


@dataclass(frozen=True)
class VicinalDensity:
    """Uniform mixture of vicinal components."""

    components: tuple

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) == 0:
            raise ParameterError("a vicinal density needs at least one component")
        object.__setattr__(self, "components", components)

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True)
class VicinalSample:
    """Provenance of one vicinal draw."""

    component: int
    sigma: float
    gamma_db: float | None


def sample_vicinal(x: Signal, density: VicinalDensity, m: int, rng: RngState):
    """m draws from the mixture neighborhood of ``x``.

    Each draw picks a component uniformly, applies its transform, and adds
    isotropic Gaussian noise at the resolved scale.  Returns
    ``(signals, records)``.
    """
    if m < 1:
        raise ParameterError(f"sample count must be >= 1, got {m}")
    signals, records = [], []
    for _ in range(m):
        k = rng.integers(len(density))
        component = density.components[k]
        z = component.mean(x)
        sigma, gamma = component.resolve_sigma(z, rng)
        noise = rng.standard_normal(len(x))
        signals.append(Signal(z.samples + sigma * noise, x.sample_rate))
        records.append(VicinalSample(component=k, sigma=sigma, gamma_db=gamma))
    return signals, records


def online_augment(
    x: Signal,
    schemes: Sequence[AugmentConfig],
    p_keep: float = 0.2,
    *,
    rng: RngState,
):
    """Keep-or-perturb policy: retain ``x`` with probability ``p_keep``
    (default 0.2), otherwise apply a uniformly drawn scheme.  Returns
    ``(signal, record)``.
    """
    if not 0.0 <= p_keep <= 1.0:
        raise ParameterError(f"p_keep must be in [0, 1], got {p_keep}")
    if p_keep < 1.0 and len(schemes) == 0:
        raise ParameterError("need at least one scheme when p_keep < 1")
    if rng.uniform(0.0, 1.0) < p_keep:
        record = AugmentRecord(
            scheme="identity",
            sample_rate=x.sample_rate,
            seed=rng.seed,
            stream=rng.stream,
        )
        return x, record
    index = rng.integers(len(schemes))
    return apply_scheme(x, schemes[index], rng)


def _check_prob_vector(v: np.ndarray, index: int):
    if np.any(v < 0):
        raise ParameterError(f"probability vector {index} has negative entries")
    total = float(v.sum())
    if abs(total - 1.0) > _PROB_SUM_TOL:
        raise ParameterError(
            f"probability vector {index} sums to {total}, not 1"
        )


def smooth_predict(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Average conditional probabilities over perturbations.

    Elementwise mean of the inputs, renormalized to absorb the input
    vectors' own rounding slack; the result is a valid probability vector.
    """
    if len(vectors) == 0:
        raise ParameterError("need at least one probability vector")
    arrays = [np.asarray(v, dtype=np.float64).reshape(-1) for v in vectors]
    dim = len(arrays[0])
    for i, v in enumerate(arrays):
        if len(v) != dim:
            raise ShapeMismatchError(
                f"probability vector {i} has length {len(v)}, expected {dim}"
            )
        _check_prob_vector(v, i)
    mean = np.mean(arrays, axis=0)
    return mean / mean.sum()


def vicinal_nll(
    evaluator: Callable[[Signal, object], float],
    pairs: Sequence,
    density: VicinalDensity,
    m: int,
    rng: RngState,
) -> float:
    """Sampled vicinal negative log-likelihood.

    Averages ``-log p(y_i | x_ij)`` over ``m`` mixture draws per training
    pair, with ``evaluator(signal, label)`` returning the log-likelihood.
    Evaluator failures are re-raised with the sample's provenance.
    """
    if len(pairs) == 0:
        raise ParameterError("need at least one (signal, label) pair")
    total = 0.0
    for i, (x, y) in enumerate(pairs):
        samples, records = sample_vicinal(x, density, m, rng)
        for j, (sample, rec) in enumerate(zip(samples, records)):
            try:
                log_p = float(evaluator(sample, y))
            except Exception as exc:
                raise EvaluationError(
                    f"evaluator failed on pair {i}, sample {j} "
                    f"(component {rec.component}, sigma {rec.sigma})"
                ) from exc
            if not np.isfinite(log_p):
                raise EvaluationError(
                    f"evaluator returned {log_p} on pair {i}, sample {j} "
                    f"(component {rec.component}, sigma {rec.sigma})"
                )
            total += log_p
    return -total / (m * len(pairs))


def default_density(
    sample_rate: int,
    rng: RngState,
    snr: SnrRange | None = None,
    support_ms: float = 25.0,
) -> VicinalDensity:
    """The stock four-component neighborhood.

    One component per augmentation scheme, each with its structural draw
    frozen from ``rng``: identity (plain additive noise, the band-limited
    scheme's mean), the double notch, one wide band, and one room response.
    All components resolve their noise scale from the same SNR range.
    """
    snr = SnrRange() if snr is None else snr
    components = [VicinalComponent(transform=None, snr=snr)]
    for scheme in (AugmentScheme.NOTCH, AugmentScheme.WIDEPASS, AugmentScheme.RIR):
        cfg = AugmentConfig.defaults(scheme, support_ms=support_ms, snr=snr)
        transform = draw_transform(cfg, sample_rate, rng)
        components.append(VicinalComponent(transform=transform, snr=snr))
    return VicinalDensity(components=tuple(components))
