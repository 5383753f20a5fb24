#!/usr/bin/env python3
"""Produce the five-panel corruption demo: clean input plus each scheme.

Writes WAVs, PGM spectrograms, and a record log into the output directory.
Without an input file a synthetic speech-like signal is used.

    python3 scripts/make_demo_panels.py out_dir [--input in.wav] [--seed 7]
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from vicaug.augment import AugmentConfig, AugmentScheme, apply_scheme
from vicaug.rng import RngState
from vicaug.signal import Signal
from vicaug.spectrogram import spectrogram, write_pgm
from vicaug.wavio import read_wav, write_wav


def synthetic_utterance(sr=16000, seconds=2.0, seed=0):
    rng = np.random.default_rng(seed)
    n = int(sr * seconds)
    t = np.arange(n) / sr
    # a few gliding "formants" over pink-ish noise
    glide = np.sin(2 * np.pi * (200 + 80 * np.sin(2 * np.pi * 0.7 * t)) * t)
    formant = 0.4 * np.sin(2 * np.pi * 1800 * t) * (0.5 + 0.5 * np.sin(2 * np.pi * 1.3 * t))
    hiss = 0.08 * np.cumsum(rng.standard_normal(n))
    hiss = hiss / np.max(np.abs(hiss)) * 0.2
    x = 0.35 * glide + formant * 0.3 + hiss
    return Signal(0.5 * x / np.max(np.abs(x)), sr)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir")
    parser.add_argument("--input", default=None)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args(argv)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    x = read_wav(args.input) if args.input else synthetic_utterance()

    write_wav(outdir / "clean.wav", x)
    write_pgm(spectrogram(x), outdir / "clean.pgm")
    lines = []
    for i, scheme in enumerate(AugmentScheme):
        out, record = apply_scheme(
            x, AugmentConfig.defaults(scheme), RngState(args.seed).substream(i)
        )
        scale = max(1.0, float(np.max(np.abs(out.samples))) / 0.99)
        write_wav(outdir / f"{scheme.value}.wav", Signal(out.samples / scale, x.sample_rate))
        write_pgm(spectrogram(out), outdir / f"{scheme.value}.pgm")
        lines.append(record.to_line())
        print(f"{scheme.value}: wrote wav + pgm (wav rescaled by 1/{scale:.3g})")
    (outdir / "records.log").write_text("\n".join(lines) + "\n")
    print(f"records -> {outdir / 'records.log'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
