from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

DEFAULT_CLIP_LO = -0.5
DEFAULT_CLIP_HI = 5.5


class Hemisphere(str, Enum):
    left = "left"
    right = "right"


def as_sorted_distances(value) -> np.ndarray:
    """Read-only float64 copy of ``value``; raises if it is not non-decreasing."""
    arr = np.array(value, dtype=np.float64).ravel()
    if arr.size > 1 and np.any(arr[1:] < arr[:-1]):
        raise ValueError("distances must be sorted in non-decreasing order")
    if not np.all(np.isfinite(arr)):
        raise ValueError("distances must be finite")
    arr.setflags(write=False)
    return arr


class ManifestEntry(BaseModel):
    subject_id: str = Field(min_length=1)
    group: str = Field(min_length=1)
    hemisphere: Hemisphere
    path: Path

    model_config = ConfigDict(frozen=True)

    @field_validator("subject_id", "group", mode="before")
    @classmethod
    def strip_text(cls, value):
        return str(value).strip()


class StudyManifest(BaseModel):
    entries: tuple[ManifestEntry, ...]
    voxel_size_mm: Optional[float] = Field(None, gt=0)
    clip_lo_mm: float = DEFAULT_CLIP_LO
    clip_hi_mm: float = DEFAULT_CLIP_HI

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_entries(self):
        if self.clip_lo_mm >= self.clip_hi_mm:
            raise ValueError("clip_lo must be smaller than clip_hi")
        return self

    @property
    def groups(self) -> list[str]:
        """Group labels in order of first appearance."""
        return list(dict.fromkeys(entry.group for entry in self.entries))

    @property
    def hemispheres(self) -> list[Hemisphere]:
        return [h for h in Hemisphere if any(e.hemisphere is h for e in self.entries)]

    def select(self, group: str, hemisphere: Hemisphere) -> list[ManifestEntry]:
        return [e for e in self.entries if e.group == group and e.hemisphere is hemisphere]


class DistanceSet(BaseModel):
    subject_id: str
    hemisphere: Hemisphere
    distances: np.ndarray
    clipped_count: int = Field(0, ge=0)
    raw_count: int = Field(ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("distances", mode="before")
    @classmethod
    def validate_distances(cls, value):
        return as_sorted_distances(value)

    @model_validator(mode="after")
    def validate_counts(self):
        if self.raw_count != self.distances.size + self.clipped_count:
            raise ValueError("raw_count must equal retained plus clipped distances")
        return self

    def __len__(self) -> int:
        return int(self.distances.size)


class PooledSample(BaseModel):
    group: str
    hemisphere: Hemisphere
    distances: np.ndarray
    subject_count: int = Field(gt=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("distances", mode="before")
    @classmethod
    def validate_distances(cls, value):
        return as_sorted_distances(value)

    def __len__(self) -> int:
        return int(self.distances.size)
