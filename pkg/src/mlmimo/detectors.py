"""Linear detectors (ZF, MMSE) and the shared hard-decision slicer."""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel, Constellation


@dataclass(frozen=True)
class DetectionResult:
    """Hard decision plus the pre-slicing soft estimate."""

    z_hat: np.ndarray  # int64, components in the constellation
    z_soft: np.ndarray  # float64


def slice_levels(v, c: Constellation) -> np.ndarray:
    """Componentwise nearest level; out-of-range values clamp to the
    extreme levels; exact midpoints break toward the lower level."""
    v = np.asarray(v, dtype=np.float64)
    k = np.ceil(v - c.lo - 0.5)
    k = np.clip(k, 0, c.m - 1).astype(np.int64)
    return c.lo + k


def zf_detect(y, model: ChannelModel, c: Constellation) -> DetectionResult:
    """Zero forcing: invert the channel, then slice."""
    z_soft = np.asarray(y, dtype=np.float64) @ model.ginv
    return DetectionResult(slice_levels(z_soft, c), z_soft)


def mmse_estimator(model: ChannelModel, c: Constellation, sigma: float) -> np.ndarray:
    """Linear MMSE matrix W with z_hat = y W, for y = zG + eta,
    E[z] = 0, E[z_i^2] = E_s: W = (G^T G + (sigma^2/E_s) I)^-1 G^T."""
    reg = sigma**2 / c.mean_square_level
    gtg = model.gt @ model.g
    return np.linalg.solve(gtg + reg * np.eye(model.n), model.gt)


def mmse_detect(y, model: ChannelModel, c: Constellation, sigma: float) -> DetectionResult:
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    z_soft = np.asarray(y, dtype=np.float64) @ mmse_estimator(model, c, sigma)
    return DetectionResult(slice_levels(z_soft, c), z_soft)
