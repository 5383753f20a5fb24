"""Seeded, counter-based random streams.

Every stochastic operation in the package draws from an explicit
:class:`RngState` so that results are pure functions of (inputs, seed).
The underlying generator is Philox4x64-256 as shipped by numpy, keyed with
the 128-bit word ``(seed, stream)``; draws go through numpy ``Generator``
methods (``random``, ``standard_normal``, ``integers``).  Given the same
seed, stream, and call sequence the output sequence is bit-identical, which
is what the golden-file and replay tests rely on.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

_UINT64_MASK = (1 << 64) - 1


class RngState:
    """A deterministic random stream identified by ``(seed, stream)``.

    The instance is stateful: each draw advances an internal position
    counter.  Two instances created with the same key and subjected to the
    same call sequence produce bit-identical values.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _UINT64_MASK
        self.stream = int(stream) & _UINT64_MASK
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))
        self.position = 0

    def __repr__(self):
        return f"RngState(seed={self.seed}, stream={self.stream}, position={self.position})"

    def uniform(self, low: float, high: float) -> float:
        """One draw from U(low, high)."""
        if high < low:
            raise ParameterError(f"uniform range is empty: [{low}, {high}]")
        self.position += 1
        return float(low + (high - low) * self._gen.random())

    def standard_normal(self, n: int) -> np.ndarray:
        """n i.i.d. draws from N(0, 1)."""
        self.position += 1
        return self._gen.standard_normal(n)

    def normal_matrix(self, shape) -> np.ndarray:
        self.position += 1
        return self._gen.standard_normal(shape)

    def integers(self, k: int) -> int:
        """One uniform integer in {0, ..., k-1}."""
        if k < 1:
            raise ParameterError(f"need k >= 1 choices, got {k}")
        self.position += 1
        return int(self._gen.integers(k))

    def draw_seed(self) -> int:
        """A fresh 64-bit seed drawn from this stream.

        Used to key the noise generator of an augmentation draw so a record
        can regenerate the exact noise without replaying the whole stream.
        """
        self.position += 1
        return int(self._gen.integers(0, _UINT64_MASK + 1, dtype=np.uint64))

    def substream(self, index: int) -> "RngState":
        """Independent child stream for batch item ``index``.

        Derivation is ``(seed, index + 1)`` on the Philox key, so item
        streams never collide with the root stream ``(seed, 0)``.
        """
        if index < 0:
            raise ParameterError(f"substream index must be non-negative, got {index}")
        return RngState(self.seed, stream=index + 1)
