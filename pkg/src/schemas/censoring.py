import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.schemas.lcdm import PooledSample


class CensoringStep(BaseModel):
    k: int = Field(ge=0)
    gamma: float

    model_config = ConfigDict(frozen=True)


class CensoringSchedule(BaseModel):
    delta: float = Field(gt=0)
    d_max: float = Field(gt=0)
    reliable_lo: float = Field(ge=0)
    steps: tuple[CensoringStep, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_steps(self):
        for i, step in enumerate(self.steps):
            if step.k != i:
                raise ValueError("steps must be numbered 0, 1, 2, ...")
            if i and step.gamma <= self.steps[i - 1].gamma:
                raise ValueError("gamma values must be strictly increasing")
        return self

    @property
    def gammas(self) -> np.ndarray:
        return np.array([step.gamma for step in self.steps], dtype=np.float64)

    def reliable(self, gamma: float) -> bool:
        return gamma >= self.reliable_lo

    def __len__(self) -> int:
        return len(self.steps)


class CensoredView(BaseModel):
    step_k: int = Field(ge=0)
    gamma: float
    count: int = Field(ge=0)
    source: PooledSample

    model_config = ConfigDict(frozen=True)

    @property
    def distances(self) -> np.ndarray:
        return self.source.distances[: self.count]
