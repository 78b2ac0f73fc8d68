import logging
from typing import Iterable, NamedTuple

import numpy as np

from src.repository.distances import load_distances
from src.schemas.lcdm import DistanceSet, Hemisphere, PooledSample, StudyManifest
from src.services import errors

logger = logging.getLogger(__name__)

# the reference study reports at most this share of distances outside the clip window
NEGLIGIBLE_CLIPPED_FRACTION = 0.002


class ClipRecord(NamedTuple):
    subject_id: str
    group: str
    hemisphere: str
    raw_count: int
    clipped_count: int

    @property
    def fraction(self) -> float:
        return self.clipped_count / self.raw_count if self.raw_count else 0.0


def clip(distance_set: DistanceSet, lo: float, hi: float) -> DistanceSet:
    """Keep distances in the closed interval [lo, hi]."""
    if not lo < hi:
        raise errors.InvalidRange(f"clip bounds must satisfy lo < hi, got [{lo}, {hi}]")
    d = distance_set.distances
    start = int(np.searchsorted(d, lo, side="left"))
    stop = int(np.searchsorted(d, hi, side="right"))
    kept = d[start:stop]
    return DistanceSet(
        subject_id=distance_set.subject_id,
        hemisphere=distance_set.hemisphere,
        distances=kept,
        clipped_count=distance_set.clipped_count + d.size - kept.size,
        raw_count=distance_set.raw_count,
    )


def pool(sets: Iterable[DistanceSet], group: str, hemisphere: Hemisphere) -> PooledSample:
    """Merge the distances of every subject of a group into one sorted multiset."""
    sets = list(sets)
    if not sets:
        raise errors.EmptyCollection(f"no distance sets to pool for group {group!r}")
    hemisphere = Hemisphere(hemisphere)
    for s in sets:
        if s.hemisphere is not hemisphere:
            raise errors.HemisphereMismatch(
                f"subject {s.subject_id!r} is {s.hemisphere.value}, expected {hemisphere.value}")
    merged = np.sort(np.concatenate([s.distances for s in sets]), kind="stable")
    return PooledSample(group=group, hemisphere=hemisphere, distances=merged,
                        subject_count=len(sets))


def pool_manifest(manifest: StudyManifest, hemisphere: Hemisphere
                  ) -> tuple[list[PooledSample], list[ClipRecord]]:
    """Load, clip and pool every group of one hemisphere, in manifest group order."""
    pooled: list[PooledSample] = []
    records: list[ClipRecord] = []
    for group in manifest.groups:
        entries = manifest.select(group, hemisphere)
        if not entries:
            continue
        sets = []
        for entry in entries:
            raw = load_distances(entry.path, entry.subject_id, entry.hemisphere)
            clipped = clip(raw, manifest.clip_lo_mm, manifest.clip_hi_mm)
            records.append(ClipRecord(entry.subject_id, group, hemisphere.value,
                                      clipped.raw_count, clipped.clipped_count))
            sets.append(clipped)
        pooled.append(pool(sets, group, hemisphere))
        logger.info("pooled %d subjects into %s/%s: %d distances",
                    len(sets), group, hemisphere.value, len(pooled[-1]))
    report_clipping(records)
    return pooled, records


def report_clipping(records: list[ClipRecord]) -> float:
    raw = sum(r.raw_count for r in records)
    clipped = sum(r.clipped_count for r in records)
    fraction = clipped / raw if raw else 0.0
    logger.info("clipped %d of %d distances (%.3f%%)", clipped, raw, 100 * fraction)
    if fraction > NEGLIGIBLE_CLIPPED_FRACTION:
        logger.warning("clipped fraction %.3f%% exceeds %.2f%%; check the clip bounds",
                       100 * fraction, 100 * NEGLIGIBLE_CLIPPED_FRACTION)
    return fraction
