"""Mono 16-bit PCM WAV reading and writing.

The parser walks RIFF chunks explicitly so malformed files produce
chunk-level diagnostics instead of generic failures.  Samples map to
[-1, 1) through division by 32768; writing rounds back, so a
write-read-write cycle is byte-identical.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import WavFormatError
from .signal import Signal

_PCM_TAG = 1
_FULL_SCALE = 32768.0


def read_wav(path) -> Signal:
    """Load a mono 16-bit PCM RIFF/WAVE file."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    payload = None
    offset = 12
    while offset + 8 <= len(data):
        chunk_id = data[offset : offset + 4]
        (chunk_size,) = struct.unpack_from("<I", data, offset + 4)
        body_start = offset + 8
        body = data[body_start : body_start + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise WavFormatError(
                    f"{path}: fmt chunk has {len(body)} bytes, expected >= 16"
                )
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise WavFormatError(
                    f"{path}: truncated data chunk: expected {chunk_size} "
                    f"bytes, got {len(body)}"
                )
            payload = body
        # chunks are word-aligned: odd sizes carry a pad byte
        offset = body_start + chunk_size + (chunk_size & 1)

    if fmt is None:
        raise WavFormatError(f"{path}: missing fmt chunk")
    if payload is None:
        raise WavFormatError(f"{path}: missing data chunk")

    tag, channels, sample_rate, _byte_rate, _block_align, bits = fmt
    if tag != _PCM_TAG:
        raise WavFormatError(f"{path}: unsupported format tag {tag} (PCM only)")
    if channels != 1:
        raise WavFormatError(f"{path}: expected mono audio, got {channels} channels")
    if bits != 16:
        raise WavFormatError(f"{path}: expected 16-bit samples, got {bits}-bit")
    if len(payload) % 2 != 0:
        raise WavFormatError(
            f"{path}: data chunk has odd byte count {len(payload)}"
        )
    samples = np.frombuffer(payload, dtype="<i2").astype(np.float64) / _FULL_SCALE
    return Signal(samples, sample_rate)


def quantize(samples: np.ndarray):
    """PCM16 quantization with hard clipping.

    Returns ``(int16 array, clipped_count)`` where the count covers samples
    outside [-1, 1).
    """
    samples = np.asarray(samples, dtype=np.float64)
    clipped = int(np.sum((samples < -1.0) | (samples >= 1.0)))
    scaled = np.round(samples * _FULL_SCALE)
    return np.clip(scaled, -32768, 32767).astype("<i2"), clipped


def write_wav(path, signal: Signal) -> int:
    """Write a mono PCM16 file; returns the number of clipped samples."""
    ints, clipped = quantize(signal.samples)
    payload = ints.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        _PCM_TAG,
        1,
        signal.sample_rate,
        signal.sample_rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    return clipped
