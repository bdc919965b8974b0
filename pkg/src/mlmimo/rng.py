"""Deterministic random streams.

Every stochastic routine in the package takes an explicit RngStream; a
(seed, stream_id) pair fully determines the sequence, so simulations are
reproducible and parallel work can derive non-overlapping child streams
instead of sharing one generator. Gaussians come from the Marsaglia polar
transform of the uniform stream, which keeps the sequence stable across
platforms (only arithmetic on IEEE doubles, no library-specific ziggurat
tables).
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def _mix64(a: int, b: int) -> int:
    """splitmix64-style hash of two 64-bit values (for child stream ids)."""
    x = (a * 0x9E3779B97F4A7C15 + b + 1) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


class RngStream:
    """PCG64 stream keyed by (seed, stream_id)."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream_id = int(stream_id) & _MASK64
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def child(self, index: int) -> "RngStream":
        """Derive an independent stream; deterministic in (stream_id, index)."""
        return RngStream(self.seed, _mix64(self.stream_id, int(index)))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1)."""
        return self._gen.random(size)

    def integers(self, m: int, size=None):
        """Uniform integers in [0, m)."""
        return self._gen.integers(0, m, size=size, dtype=np.int64)

    def normal(self, size=None):
        """Standard normals via the Marsaglia polar method."""
        if size is None:
            return self._polar(1)[0]
        n = int(np.prod(size))
        return self._polar(n).reshape(size)

    def _polar(self, n: int) -> np.ndarray:
        out = np.empty(n + 1)  # +1 slack for the pair the method emits
        filled = 0
        while filled < n:
            m = max((n - filled + 1) // 2, 64)
            u = 2.0 * self._gen.random((m, 2)) - 1.0
            s = u[:, 0] * u[:, 0] + u[:, 1] * u[:, 1]
            ok = (s > 0.0) & (s < 1.0)
            s_ok = s[ok]
            f = np.sqrt(-2.0 * np.log(s_ok) / s_ok)
            pairs = u[ok] * f[:, None]
            take = min(2 * len(s_ok), n + 1 - filled)
            out[filled : filled + take] = pairs.reshape(-1)[:take]
            filled += take
        return out[:n]
