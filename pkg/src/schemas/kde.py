import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _read_only(value) -> np.ndarray:
    arr = np.array(value, dtype=np.float64).ravel()
    arr.setflags(write=False)
    return arr


class DensityCurve(BaseModel):
    """Kernel density of one sample on a grid (mm); ``density`` is per mm."""

    label: str = ""
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float = Field(gt=0)
    n: int = Field(ge=1)
    scale: float = Field(1.0, gt=0)  # n for count-scaled curves

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("grid", "density", mode="before")
    @classmethod
    def validate_array(cls, value):
        return _read_only(value)

    @model_validator(mode="after")
    def validate_curve(self):
        if self.grid.size != self.density.size:
            raise ValueError("grid and density must have the same length")
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(self.density < 0) or not np.all(np.isfinite(self.density)):
            raise ValueError("density must be finite and non-negative")
        return self

    def mass(self) -> float:
        """Trapezoid integral of the unscaled density."""
        d = self.density
        return float(np.sum(np.diff(self.grid) * (d[1:] + d[:-1])) / 2.0 / self.scale)
