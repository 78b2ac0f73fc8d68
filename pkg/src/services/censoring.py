import logging
import math

import numpy as np

from src.schemas.censoring import CensoredView, CensoringSchedule, CensoringStep
from src.schemas.lcdm import PooledSample
from src.services import errors

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 0.01
DEFAULT_D_MAX = 5.5
DEFAULT_RELIABLE_LO = 1.0
# recommended bin-size range for mm-precision distances
RECOMMENDED_DELTA = (0.01, 0.5)


def make_schedule(delta: float = DEFAULT_DELTA, d_max: float = DEFAULT_D_MAX,
                  reliable_lo: float = DEFAULT_RELIABLE_LO,
                  voxel_size_mm: float | None = None) -> CensoringSchedule:
    """Thresholds gamma_k = k * delta for k = 0 .. floor(d_max / delta)."""
    if not delta > 0 or not d_max > 0:
        raise errors.InvalidParameter(f"delta and d_max must be positive, got {delta}, {d_max}")
    if not 0 <= reliable_lo <= d_max:
        raise errors.InvalidParameter(f"reliable_lo must lie in [0, {d_max}], got {reliable_lo}")
    # tolerate d_max / delta landing a hair below an integer
    last = math.floor(d_max / delta + 1e-9)
    if voxel_size_mm is not None and delta > voxel_size_mm:
        logger.warning("bin size %.4g mm exceeds the voxel size %.4g mm and may oversmooth",
                       delta, voxel_size_mm)
    if not RECOMMENDED_DELTA[0] <= delta <= RECOMMENDED_DELTA[1]:
        logger.warning("bin size %.4g mm is outside the recommended range [%.2f, %.2f] mm",
                       delta, *RECOMMENDED_DELTA)
    steps = tuple(CensoringStep(k=k, gamma=k * delta) for k in range(last + 1))
    return CensoringSchedule(delta=delta, d_max=d_max, reliable_lo=reliable_lo, steps=steps)


def censor(sample: PooledSample, gamma: float, step_k: int = 0) -> CensoredView:
    count = int(np.searchsorted(sample.distances, gamma, side="right"))
    return CensoredView(step_k=step_k, gamma=gamma, count=count, source=sample)


def sweep_counts(distances: np.ndarray, gammas: np.ndarray) -> np.ndarray:
    """Retained-distance count at every threshold, one merge pass over the sorted data."""
    counts = np.empty(gammas.size, dtype=np.int64)
    cursor = 0
    n = distances.size
    for k, gamma in enumerate(gammas):
        while cursor < n and distances[cursor] <= gamma:
            cursor += 1
        counts[k] = cursor
    return counts


def censor_sweep(sample: PooledSample, schedule: CensoringSchedule) -> list[CensoredView]:
    counts = sweep_counts(sample.distances, schedule.gammas)
    return [CensoredView(step_k=step.k, gamma=step.gamma, count=int(c), source=sample)
            for step, c in zip(schedule.steps, counts)]
