"""Command-line interface.

Subcommands: ``augment`` (apply a scheme to WAV files), ``rir`` (export a
room impulse response), ``design-filter`` (print tap lists), ``spectrogram``
(PGM/CSV export), ``verify-theorem`` (concentration-bound check), and
``sample-vicinal`` (draw neighborhood samples).  Exit codes: 0 success,
1 usage error, 2 data error.  Any command taking ``--seed`` is
byte-reproducible across runs.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import sys
from pathlib import Path

import numpy as np

from . import theory
from .augment import AugmentConfig, AugmentScheme, apply_scheme
from .config import build_config, load_config
from .errors import ParameterError, VicaugError
from .filters import NotchSpec, ParzenFilterSpec, bandwidth_to_gamma, format_taps, notch_filter, parzen_filter
from .rng import RngState
from .room import RoomConfig, image_source_rir, material_absorption, sample_geometry
from .signal import Signal
from .spectrogram import SpectrogramSpec, bin_frequencies, spectrogram, write_csv, write_pgm
from .vicinal import default_density, sample_vicinal
from .wavio import read_wav, write_wav

_SCHEME_CHOICES = [s.value for s in AugmentScheme] + ["random"]


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vicaug", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_aug = sub.add_parser("augment", help="corrupt WAV files with one scheme")
    p_aug.add_argument("input", help="input WAV file or directory")
    p_aug.add_argument("output", help="output WAV file or directory")
    p_aug.add_argument("--scheme", choices=_SCHEME_CHOICES, default="random")
    p_aug.add_argument("--seed", type=int, default=0)
    p_aug.add_argument("--snr-min", type=float, default=None)
    p_aug.add_argument("--snr-max", type=float, default=None)
    p_aug.add_argument("--config", default=None, help="JSON config file")
    p_aug.set_defaults(func=_cmd_augment)

    p_rir = sub.add_parser("rir", help="write a sampled room impulse response")
    p_rir.add_argument("output", help="output WAV file")
    p_rir.add_argument("--room", default="4x4x2.5", help="dimensions, e.g. 4x4x2.5")
    p_rir.add_argument("--material", default="hard_surface")
    p_rir.add_argument("--distance", type=float, default=1.0)
    p_rir.add_argument("--seed", type=int, default=0)
    p_rir.add_argument("--sample-rate", type=int, default=16000)
    p_rir.add_argument("--max-order", type=int, default=8)
    p_rir.set_defaults(func=_cmd_rir)

    p_design = sub.add_parser("design-filter", help="print a tap list")
    p_design.add_argument("--type", choices=["parzen", "notch"], required=True)
    p_design.add_argument("--sample-rate", type=int, default=16000)
    p_design.add_argument("--center-freq", type=float, help="parzen: center (Hz)")
    p_design.add_argument("--bandwidth", type=float, help="parzen: -3 dB width (Hz)")
    p_design.add_argument("--gamma", type=float, help="parzen: width parameter override")
    p_design.add_argument("--support-ms", type=float, default=25.0)
    p_design.add_argument("--dip-freq", type=float, help="notch: dip location (Hz)")
    p_design.set_defaults(func=_cmd_design_filter)

    p_spec = sub.add_parser("spectrogram", help="export a log-magnitude spectrogram")
    p_spec.add_argument("input", help="input WAV file")
    p_spec.add_argument("pgm", help="output PGM image")
    p_spec.add_argument("csv", nargs="?", default=None, help="optional CSV output")
    p_spec.set_defaults(func=_cmd_spectrogram)

    p_thm = sub.add_parser("verify-theorem", help="Monte-Carlo concentration check")
    p_thm.add_argument("--statistic", choices=["identity", "linear", "quadratic"], required=True)
    p_thm.add_argument("--sigma", type=float, required=True)
    p_thm.add_argument("--delta", type=float, required=True)
    p_thm.add_argument("--samples", type=int, default=10000)
    p_thm.add_argument("--dim", type=int, default=16)
    p_thm.add_argument("--seed", type=int, default=0)
    p_thm.set_defaults(func=_cmd_verify_theorem)

    p_vic = sub.add_parser("sample-vicinal", help="draw neighborhood samples")
    p_vic.add_argument("input", help="input WAV file")
    p_vic.add_argument("outdir", help="output directory")
    p_vic.add_argument("--m", type=int, default=4)
    p_vic.add_argument("--seed", type=int, default=0)
    p_vic.set_defaults(func=_cmd_sample_vicinal)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (VicaugError, OSError) as exc:
        print(f"vicaug: error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    raise SystemExit(main())


def _resolve_scheme(name: str, rng: RngState) -> AugmentScheme:
    if name == "random":
        return list(AugmentScheme)[rng.integers(len(AugmentScheme))]
    return AugmentScheme(name)


def _augment_one(path_in, path_out, scheme_name, file_cfg, args, rng):
    x = read_wav(path_in)
    scheme = _resolve_scheme(scheme_name, rng)
    cfg = build_config(scheme, file_cfg, args.snr_min, args.snr_max)
    out, record = apply_scheme(x, cfg, rng)
    clipped = write_wav(path_out, out)
    if clipped:
        print(
            f"vicaug: warning: {path_out}: clipped {clipped} samples",
            file=sys.stderr,
        )
    return record.to_line()


def _cmd_augment(args) -> int:
    file_cfg = load_config(args.config) if args.config else None
    src = Path(args.input)
    if src.is_dir():
        dst = Path(args.output)
        dst.mkdir(parents=True, exist_ok=True)
        names = sorted(p.name for p in src.glob("*.wav"))
        if not names:
            raise ParameterError(f"{src}: no WAV files found")
        root = RngState(args.seed)

        def work(item):
            index, name = item
            rng = root.substream(index)
            line = _augment_one(src / name, dst / name, args.scheme, file_cfg, args, rng)
            return name, line

        with concurrent.futures.ThreadPoolExecutor() as pool:
            results = list(pool.map(work, enumerate(names)))
        for name, line in sorted(results):
            print(f"file={name} {line}")
        return 0

    line = _augment_one(src, Path(args.output), args.scheme, file_cfg, args, RngState(args.seed))
    print(line)
    return 0


def _parse_room(text: str) -> tuple:
    try:
        dims = tuple(float(part) for part in text.lower().split("x"))
    except ValueError:
        raise ParameterError(f"cannot parse room dimensions {text!r}") from None
    if len(dims) != 3:
        raise ParameterError(f"room needs 3 dimensions, got {text!r}")
    return dims


def _cmd_rir(args) -> int:
    alpha = material_absorption(args.material)
    room = RoomConfig(
        dims=_parse_room(args.room),
        material=args.material,
        absorption=alpha,
        max_order=args.max_order,
    )
    rng = RngState(args.seed)
    geo = sample_geometry(room, args.distance, args.distance, rng)
    rir = image_source_rir(room, geo, args.sample_rate)
    peak = float(np.max(np.abs(rir.samples)))
    scale = 0.9 / peak
    write_wav(args.output, Signal(rir.samples * scale, rir.sample_rate))
    print(
        f"room={args.room} material={args.material} alpha={alpha!r} "
        f"distance={geo.distance!r} mic={','.join(repr(float(v)) for v in geo.mic)} "
        f"source={','.join(repr(float(v)) for v in geo.source)} "
        f"samples={len(rir)} wav_scale={scale!r}"
    )
    return 0


def _cmd_design_filter(args) -> int:
    if args.type == "notch":
        if args.dip_freq is None:
            raise ParameterError("notch design needs --dip-freq")
        fir = notch_filter(NotchSpec(args.dip_freq), args.sample_rate)
    else:
        if args.center_freq is None:
            raise ParameterError("parzen design needs --center-freq")
        support = int(round(args.support_ms * args.sample_rate / 1000.0))
        if args.gamma is not None:
            gamma = args.gamma
        elif args.bandwidth is not None:
            gamma = bandwidth_to_gamma(args.bandwidth, args.sample_rate, support)
        else:
            raise ParameterError("parzen design needs --bandwidth or --gamma")
        fir = parzen_filter(
            ParzenFilterSpec(args.center_freq, gamma, support), args.sample_rate
        )
        if fir.truncated:
            print("vicaug: warning: filter truncated at support", file=sys.stderr)
    print(format_taps(fir))
    return 0


def _cmd_spectrogram(args) -> int:
    x = read_wav(args.input)
    spec = SpectrogramSpec()
    matrix = spectrogram(x, spec)
    write_pgm(matrix, args.pgm)
    if args.csv:
        write_csv(matrix, args.csv, bin_frequencies(spec, x.sample_rate))
    return 0


def _make_statistic(name: str, dim: int, rng: RngState):
    if name == "identity":
        return theory.identity_statistic(dim)
    if name == "linear":
        w = rng.normal_matrix((dim, dim))
        return theory.linear_statistic(w)
    mats = [np.diag(1.0 + rng.standard_normal(dim) ** 2) for _ in range(3)]
    return theory.quadratic_statistic(mats)


def _cmd_verify_theorem(args) -> int:
    rng = RngState(args.seed)
    psi = _make_statistic(args.statistic, args.dim, rng)
    x = rng.standard_normal(args.dim)
    report = theory.verify_bound(
        psi, x, sigma=args.sigma, delta=args.delta, n_samples=args.samples, rng=rng
    )
    print(f"statistic={args.statistic}")
    print(report.to_text())
    return 0


def _cmd_sample_vicinal(args) -> int:
    x = read_wav(args.input)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = RngState(args.seed)
    density = default_density(x.sample_rate, rng)
    samples, records = sample_vicinal(x, density, args.m, rng)
    for i, (sample, rec) in enumerate(zip(samples, records)):
        path = outdir / f"sample_{i:03d}.wav"
        clipped = write_wav(path, sample)
        if clipped:
            print(
                f"vicaug: warning: {path}: clipped {clipped} samples",
                file=sys.stderr,
            )
        gamma = "none" if rec.gamma_db is None else repr(float(rec.gamma_db))
        print(
            f"index={i} file={path.name} component={rec.component} "
            f"sigma={rec.sigma!r} gamma_db={gamma}"
        )
    return 0
