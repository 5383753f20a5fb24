import dataclasses

import numpy as np
import pytest

import vicaug
import vicaug_bindings as vb
from vicaug.augment import AugmentConfig, AugmentScheme, SnrRange, apply_scheme
from vicaug.errors import ParameterError, ShapeMismatchError
from vicaug.rng import RngState
from vicaug.signal import Signal
from vicaug.vicinal import VicinalComponent, VicinalDensity, default_density, sample_vicinal

SR = 16000


def waveform(seed=0, n=8000):
    rng = np.random.default_rng(seed)
    t = np.arange(n) / SR
    return 0.3 * np.sin(2 * np.pi * 300 * t) + 0.05 * rng.standard_normal(n)


class TestVersion:
    def test_matches_engine(self):
        assert vb.__version__ == vicaug.__version__


class TestAugment:
    def test_bit_identical_to_engine(self):
        x = waveform(1)
        out, record = vb.augment(x, SR, "notch", seed=5)
        engine_out, engine_record = apply_scheme(
            Signal(x, SR), AugmentConfig.defaults("notch"), RngState(5)
        )
        assert np.array_equal(out, engine_out.samples)
        assert record == dataclasses.asdict(engine_record)

    def test_seed_determinism(self):
        x = waveform(2)
        a, ra = vb.augment(x, SR, "widepass", seed=9)
        b, rb = vb.augment(x, SR, "widepass", seed=9)
        assert np.array_equal(a, b)
        assert ra == rb

    def test_config_overrides_forwarded(self):
        x = waveform(3)
        _, record = vb.augment(x, SR, "bandlimited", seed=1, snr=SnrRange(20.0, 20.0))
        assert record["gamma_db"] == 20.0

    def test_rejects_2d(self):
        with pytest.raises(ShapeMismatchError, match="1-D"):
            vb.augment(np.zeros((2, 100)), SR, "notch", seed=0)

    def test_engine_error_text_preserved(self):
        x = np.sin(np.arange(4000) / 4)
        with pytest.raises(ParameterError) as binding_err:
            vb.augment(x, 8000, "widepass", seed=0)
        with pytest.raises(ParameterError) as engine_err:
            apply_scheme(Signal(x, 8000), AugmentConfig.defaults("widepass"), RngState(0))
        assert str(binding_err.value) == str(engine_err.value)

    def test_caller_memory_untouched(self):
        x = waveform(4)
        before = x.copy()
        vb.augment(x, SR, "bandlimited", seed=0)
        assert np.array_equal(x, before)

    def test_no_hidden_state_across_interleaved_sessions(self):
        x = waveform(5)
        a1, _ = vb.augment(x, SR, "notch", seed=1)
        b1, _ = vb.augment(x, SR, "notch", seed=2)
        a2, _ = vb.augment(x, SR, "notch", seed=1)
        b2, _ = vb.augment(x, SR, "notch", seed=2)
        assert np.array_equal(a1, a2)
        assert np.array_equal(b1, b2)


class TestSampleVicinal:
    def test_degenerate_density_returns_input(self):
        x = waveform(6)
        density = VicinalDensity((VicinalComponent(sigma=0.0),))
        out = vb.sample_vicinal(x, SR, 1, seed=3, density=density)
        assert len(out) == 1
        assert np.array_equal(out[0], x)

    def test_seed_determinism(self):
        x = waveform(7)
        a = vb.sample_vicinal(x, SR, 3, seed=11)
        b = vb.sample_vicinal(x, SR, 3, seed=11)
        assert all(np.array_equal(u, v) for u, v in zip(a, b))

    def test_matches_engine_default_path(self):
        x = waveform(8)
        out = vb.sample_vicinal(x, SR, 4, seed=13)
        rng = RngState(13)
        density = default_density(SR, rng)
        engine_out, _ = sample_vicinal(Signal(x, SR), density, 4, rng)
        assert all(np.array_equal(u, v.samples) for u, v in zip(out, engine_out))

    def test_component_usage_uniform(self):
        # same chi-square gate as the engine's own sampler test
        import scipy.stats

        x = np.ones(4)
        density = VicinalDensity(tuple(VicinalComponent(sigma=0.0) for _ in range(4)))
        rng = RngState(21)
        _, records = sample_vicinal(Signal(x, SR), density, 10_000, rng)
        counts = np.bincount([r.component for r in records], minlength=4)
        chi2 = np.sum((counts - 2500.0) ** 2 / 2500.0)
        assert chi2 < scipy.stats.chi2.ppf(0.99, df=3)
