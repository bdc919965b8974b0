"""Exact maximum-likelihood detection: the ground-truth oracle.

exhaustive_search scans every constellation point and is the reference
for everything else; sphere_decode reproduces it exactly (same
lexicographic tie-break) via box-constrained Schnorr-Euchner enumeration
on the QR factors cached in the channel model. No basis reduction is
applied anywhere: reduction would break the per-component box
constraints, and n <= 16 keeps plain enumeration fast.
"""

import numpy as np

from . import kernels
from .channel import ChannelModel, Constellation
from .detectors import DetectionResult, slice_levels
from .errors import DimensionTooLarge, SearchSpaceTooLarge

_EXHAUSTIVE_BUDGET = 10**7
_CHUNK = 1 << 14


def exhaustive_search(y, model: ChannelModel, c: Constellation) -> DetectionResult:
    """Global minimizer of ||y - zG||^2 over all M^n candidates.

    Candidates are scanned in lexicographic order and only strict
    improvements are kept, so distance ties resolve to the smallest z.
    """
    n = model.n
    total = c.m**n
    if total > _EXHAUSTIVE_BUDGET:
        raise SearchSpaceTooLarge(f"M^n = {total} exceeds {_EXHAUSTIVE_BUDGET}")
    y = np.asarray(y, dtype=np.float64)
    levels = np.array(c.levels, dtype=np.int64)
    weights = c.m ** np.arange(n - 1, -1, -1, dtype=np.int64)  # z[0] most significant

    best_d = np.inf
    best_z = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % c.m
        zs = levels[digits]
        resid = y[None, :] - zs @ model.g
        d = np.einsum("ij,ij->i", resid, resid)
        k = int(np.argmin(d))
        if d[k] < best_d:
            best_d = float(d[k])
            best_z = zs[k].copy()
    return DetectionResult(best_z, best_z.astype(np.float64))


def sphere_decode(y, model: ChannelModel, c: Constellation) -> DetectionResult:
    """Exact MLD by depth-first enumeration; identical output (including
    tie-breaks) to exhaustive_search. Warm-started at the sliced ZF point."""
    if model.n > 16:
        raise DimensionTooLarge(f"sphere decoder capped at n=16, got {model.n}")
    y = np.asarray(y, dtype=np.float64)
    ytilde = model.reduce_received(y)
    z0 = slice_levels(y @ model.ginv, c)
    z, _ = kernels.decode_box(model.lattice_r, ytilde, c.lo, c.m, z0)
    return DetectionResult(z, z.astype(np.float64))


def sphere_decode_batch(ys, model: ChannelModel, c: Constellation) -> np.ndarray:
    """Row-wise sphere decoding; returns (B, n) int64 decisions."""
    if model.n > 16:
        raise DimensionTooLarge(f"sphere decoder capped at n=16, got {model.n}")
    ys = np.asarray(ys, dtype=np.float64)
    ytilde = ys @ model.lattice_q
    z0 = slice_levels(ys @ model.ginv, c)
    out = np.empty_like(z0)
    r = model.lattice_r
    for i in range(ys.shape[0]):
        out[i], _ = kernels.decode_box(r, ytilde[i], c.lo, c.m, z0[i])
    return out


def closest_lattice_point(x, basis: np.ndarray, q=None, r=None, binv=None):
    """Unconstrained CVP: integer coefficients t minimizing ||x - t B||.

    Pass precomputed QR factors of B^T (and B^-1) when calling in a loop.
    Returns (t, squared distance).
    """
    from . import linalg

    basis = np.asarray(basis, dtype=np.float64)
    if q is None or r is None:
        q, r = linalg.qr_decompose(basis.T)
    if binv is None:
        binv = linalg.inverse(basis)
    x = np.asarray(x, dtype=np.float64)
    z0 = np.floor(x @ binv + 0.5).astype(np.int64)  # Babai rounding warm start
    return kernels.decode_unbounded(r, x @ q, z0)


def shortest_vector(model: ChannelModel):
    """Shortest nonzero lattice vector of the row lattice of G.

    Returns (vector, norm); the coefficient sign is canonicalized so the
    first nonzero coefficient is positive.
    """
    if model.n > 16:
        raise DimensionTooLarge(f"SVP enumeration capped at n=16, got {model.n}")
    row_norms = np.linalg.norm(model.g, axis=1)
    z0 = np.zeros(model.n, dtype=np.int64)
    z0[int(np.argmin(row_norms))] = 1
    z, d = kernels.shortest_nonzero(model.lattice_r, z0)
    nz = np.nonzero(z)[0]
    if len(nz) and z[nz[0]] < 0:
        z = -z
    return z.astype(np.float64) @ model.g, float(np.sqrt(d))
