"""Gaussian kernel density estimates and empirical CDFs of distance samples."""
import math
from typing import Sequence

import numpy as np

from src.schemas.kde import DensityCurve
from src.services import errors

DEFAULT_GRID_POINTS = 512
GRID_PAD_BANDWIDTHS = 4.0
# grid points x sample points evaluated per block
BLOCK_SIZE = 4_000_000
INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def silverman_bandwidth(sample: Sequence[float]) -> float:
    """0.9 * min(sd, IQR / 1.34) * n^(-1/5); sd alone when the IQR is zero."""
    x = np.asarray(sample, dtype=np.float64)
    if x.size < 2:
        raise errors.InsufficientData(f"bandwidth needs at least 2 values, got {x.size}")
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        raise errors.ZeroSpread("sample is constant")
    q75, q25 = np.percentile(x, [75, 25])
    iqr = float(q75 - q25)
    spread = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 0.9 * spread * x.size ** -0.2


def default_grid(sample: Sequence[float], bandwidth: float,
                 points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    x = np.asarray(sample, dtype=np.float64)
    pad = GRID_PAD_BANDWIDTHS * bandwidth
    return np.linspace(x.min() - pad, x.max() + pad, points)


def gaussian_kde(sample: Sequence[float], bandwidth: float, grid: Sequence[float],
                 label: str = "", counts: bool = False) -> DensityCurve:
    """Direct evaluation of (1 / (n h)) sum_i phi((g - x_i) / h) on every grid point.

    With ``counts`` the density is multiplied by n (distances per mm).
    """
    if not bandwidth > 0 or not math.isfinite(bandwidth):
        raise errors.InvalidBandwidth(f"bandwidth must be positive, got {bandwidth}")
    x = np.asarray(sample, dtype=np.float64)
    if x.size == 0:
        raise errors.InsufficientData("cannot estimate a density from an empty sample")
    g = np.asarray(grid, dtype=np.float64)
    density = np.zeros(g.size)
    block = max(1, BLOCK_SIZE // max(1, g.size))
    for start in range(0, x.size, block):
        u = (g[:, None] - x[None, start:start + block]) / bandwidth
        density += np.exp(-0.5 * u * u).sum(axis=1)
    density *= INV_SQRT_2PI / (x.size * bandwidth)
    scale = float(x.size) if counts else 1.0
    return DensityCurve(label=label, grid=g, density=density * scale, bandwidth=bandwidth,
                        n=x.size, scale=scale)


def estimate(sample: Sequence[float], label: str = "", bandwidth: float | None = None,
             grid: Sequence[float] | None = None, points: int = DEFAULT_GRID_POINTS,
             counts: bool = False) -> DensityCurve:
    """KDE with Silverman's bandwidth and the padded default grid unless given."""
    h = silverman_bandwidth(sample) if bandwidth is None else bandwidth
    if grid is None:
        if not h > 0:
            raise errors.InvalidBandwidth(f"bandwidth must be positive, got {h}")
        grid = default_grid(sample, h, points)
    return gaussian_kde(sample, h, grid, label=label, counts=counts)


def shared_grid(samples: Sequence[Sequence[float]], bandwidths: Sequence[float],
                points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """One grid covering every sample padded by its own bandwidth."""
    pad = GRID_PAD_BANDWIDTHS * max(bandwidths)
    lo = min(float(np.min(s)) for s in samples) - pad
    hi = max(float(np.max(s)) for s in samples) + pad
    return np.linspace(lo, hi, points)


def ecdf(sample: Sequence[float], grid: Sequence[float]) -> np.ndarray:
    """Fraction of the sample at or below each grid point."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    if x.size == 0:
        raise errors.InsufficientData("cannot build an ecdf from an empty sample")
    return np.searchsorted(x, np.asarray(grid, dtype=np.float64), side="right") / x.size
