"""Constellation, flat MIMO channel model, noise and SNR bookkeeping.

The channel is y = z G + eta with row vectors, G a fixed (quasi-static)
real n x n matrix and eta i.i.d. zero-mean Gaussian with per-component
standard deviation sigma (variance N0/2). SNR is defined as total
received signal power over total noise power,

    SNR = E[|z G|^2] / E[|eta|^2] = E_s ||G||_F^2 / (n sigma^2),

with E_s the mean squared constellation level. The channel matrix is
frozen per experiment; derived products are cached at construction and
never mutated.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    RejectionBudgetExceeded,
)
from .rng import RngStream


@dataclass(frozen=True)
class Constellation:
    """M consecutive integer levels, ascending."""

    levels: tuple

    def __post_init__(self):
        lv = tuple(int(v) for v in self.levels)
        if len(lv) < 1:
            raise ValueError("constellation needs at least one level")
        for a, b in zip(lv, lv[1:]):
            if b - a != 1:
                raise ValueError(f"levels must be consecutive integers, got {lv}")
        object.__setattr__(self, "levels", lv)

    @classmethod
    def centered(cls, m: int) -> "Constellation":
        """Default level set: odd M centered at 0, even M = {-M/2..M/2-1}."""
        if m < 1:
            raise ValueError("M must be >= 1")
        lo = -(m // 2)
        return cls(tuple(range(lo, lo + m)))

    @property
    def m(self) -> int:
        return len(self.levels)

    @property
    def lo(self) -> int:
        return self.levels[0]

    @property
    def hi(self) -> int:
        return self.levels[-1]

    @property
    def mean_square_level(self) -> float:
        return float(np.mean(np.square(self.levels, dtype=np.float64)))

    def array(self) -> np.ndarray:
        return np.array(self.levels, dtype=np.float64)


@dataclass(frozen=True)
class NoiseSpec:
    """Per-component noise standard deviation (sigma^2 = N0/2)."""

    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise ValueError(f"sigma must be finite and >= 0, got {self.sigma}")


class ChannelModel:
    """n x n channel matrix with cached derived products.

    Caches: G^T, G G^T, G^-1, and the QR factors of G^T (the form the
    sphere decoder consumes, since ||y - zG|| = ||Q^T y^T - R z^T||).
    All arrays are frozen read-only.
    """

    def __init__(self, g):
        g = np.array(g, dtype=np.float64)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError(f"channel matrix must be square, got {g.shape}")
        self.n = g.shape[0]
        self.g = g
        self.gt = g.T.copy()
        self.ggt = g @ g.T
        self.ginv = linalg.inverse(g)
        self.lattice_q, self.lattice_r = linalg.qr_decompose(g.T)
        for arr in (self.g, self.gt, self.ggt, self.ginv, self.lattice_q, self.lattice_r):
            arr.setflags(write=False)

    @property
    def frobenius_sq(self) -> float:
        return float(np.sum(self.g * self.g))

    @property
    def abs_det(self) -> float:
        return float(np.prod(np.diag(self.lattice_r)))

    def reduce_received(self, y) -> np.ndarray:
        """Map y into the sphere-decoder frame: ytilde = y Q."""
        return np.asarray(y, dtype=np.float64) @ self.lattice_q


def sample_message(rng: RngStream, c: Constellation, n: int) -> np.ndarray:
    """n i.i.d. symbols, each uniform over the constellation levels."""
    if n < 1:
        raise ValueError("n must be >= 1")
    idx = rng.integers(c.m, size=n)
    return np.array(c.levels, dtype=np.int64)[idx]


def sample_messages(rng: RngStream, c: Constellation, count: int, n: int) -> np.ndarray:
    """(count, n) block of i.i.d. uniform symbols."""
    idx = rng.integers(c.m, size=(count, n))
    return np.array(c.levels, dtype=np.int64)[idx]


def transmit(z, model: ChannelModel, noise: NoiseSpec, rng: RngStream) -> np.ndarray:
    """y = z G + sigma * eta. sigma = 0 gives exactly z G."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != model.n:
        raise DimensionMismatch(f"message length {z.shape[-1]} != channel n {model.n}")
    return z @ model.g + noise.sigma * rng.normal(z.shape)


def snr_to_sigma(snr_db: float, c: Constellation, model: ChannelModel) -> NoiseSpec:
    """Invert 10 log10(E_s ||G||_F^2 / (n sigma^2)) = snr_db for sigma."""
    es = c.mean_square_level
    if es <= 0.0:
        raise ValueError("constellation has zero mean-square level; SNR undefined")
    snr = 10.0 ** (snr_db / 10.0)
    return NoiseSpec(math.sqrt(es * model.frobenius_sq / (model.n * snr)))


def generate_channel(rng: RngStream, n: int, cond_range=None, budget: int = 100000) -> ChannelModel:
    """i.i.d. N(0,1) channel draw, rejection-sampled into cond_range if given."""
    if n < 2:
        raise ValueError("n must be >= 2")
    for _ in range(budget):
        g = rng.normal((n, n))
        try:
            model = ChannelModel(g)
        except linalg.SingularMatrix:
            continue
        if cond_range is None:
            return model
        lo, hi = cond_range
        if lo <= linalg.condition_number(model.g) <= hi:
            return model
    raise RejectionBudgetExceeded(
        f"no draw with condition in {cond_range} after {budget} rejections"
    )


def diagnostics(model: ChannelModel):
    """(condition number, Hermite constant in dB) of the channel lattice.

    hermite_db = 10 log10(lambda1^2 / |det G|^(2/n)) with lambda1 the
    shortest nonzero lattice vector norm, found by exact enumeration.
    """
    if model.n > 16:
        raise DimensionTooLarge(f"shortest-vector search capped at n=16, got {model.n}")
    from .mld import shortest_vector  # local import: mld depends on this module

    cond = linalg.condition_number(model.g)
    _, lam1 = shortest_vector(model)
    hermite_db = 10.0 * math.log10(lam1**2 / model.abs_det ** (2.0 / model.n))
    return cond, hermite_db


def format_diagnostics(model: ChannelModel) -> str:
    cond, hermite_db = diagnostics(model)
    return f"condition={cond:.6g} hermite_db={hermite_db:.6g}"
