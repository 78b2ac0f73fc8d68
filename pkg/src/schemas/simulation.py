from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.schemas.censoring import CensoringSchedule
from src.schemas.stats import Alternative, TestName

# counts per 0.5 mm stack of the reference subject's left hemisphere
REFERENCE_STACKS = (2059, 1898, 1764, 1670, 1492, 1268, 814, 417, 142, 81, 61, 16)
MAX_ETA = max(REFERENCE_STACKS)
MAX_R = 2.0


class RemainderPlacement(str, Enum):
    append = "append"
    sorted = "sorted"


class FrequencyProfile(BaseModel):
    stacks: tuple[int, ...]

    model_config = ConfigDict(frozen=True)

    @field_validator("stacks")
    @classmethod
    def validate_stacks(cls, value):
        if not value:
            raise ValueError("a profile needs at least one stack")
        if any(v < 0 for v in value):
            raise ValueError("stack counts must be non-negative")
        if sum(value) <= 0:
            raise ValueError("stack counts must not all be zero")
        return value

    @property
    def total(self) -> int:
        return sum(self.stacks)

    @property
    def probabilities(self) -> tuple[float, ...]:
        total = self.total
        return tuple(v / total for v in self.stacks)


class GeneratorParams(BaseModel):
    eta: int = Field(0, ge=0, lt=MAX_ETA)
    r: float = Field(1.0, gt=0, lt=MAX_R)
    n: int = Field(10_000, gt=0)
    seed: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True)


class SampleSpec(BaseModel):
    label: str = Field(min_length=1)
    eta: int = Field(0, ge=0, lt=MAX_ETA)
    r: float = Field(1.0, gt=0, lt=MAX_R)
    n: int = Field(10_000, gt=0)

    model_config = ConfigDict(frozen=True)

    @field_validator("label")
    @classmethod
    def validate_label(cls, value: str):
        if ":" in value or "," in value:
            raise ValueError("sample labels may not contain ':' or ','")
        return value


class ScenarioConfig(BaseModel):
    sample_specs: tuple[SampleSpec, ...]
    n_mc: int = Field(1000, ge=1)
    alpha: float = Field(0.05, gt=0, lt=1)
    level: float = Field(0.95, gt=0, lt=1)
    schedule: CensoringSchedule
    tests: tuple[TestName, ...]
    pairs: tuple[tuple[str, str], ...] = ()
    alternative: Alternative = Alternative.less
    master_seed: int = Field(0, ge=0)
    remainder_placement: RemainderPlacement = RemainderPlacement.append

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_scenario(self):
        labels = [s.label for s in self.sample_specs]
        if len(labels) < 2:
            raise ValueError("a scenario needs at least 2 samples")
        if len(set(labels)) != len(labels):
            raise ValueError("sample labels must be unique")
        for first, second in self.pairs:
            if first not in labels or second not in labels or first == second:
                raise ValueError(f"pair {first}:{second} does not name two distinct samples")
        if not self.tests:
            raise ValueError("a scenario needs at least one test")
        return self


class CurveRow(BaseModel):
    step: int
    gamma_mm: float
    test: TestName
    comparison: str
    alternative: Alternative
    mean_p: Optional[float] = None
    p_lo: Optional[float] = None
    p_hi: Optional[float] = None
    rejection_rate: Optional[float] = None
    rej_lo: Optional[float] = None
    rej_hi: Optional[float] = None
    n_valid: int = Field(ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_bands(self):
        for lo, point, hi in ((self.p_lo, self.mean_p, self.p_hi),
                              (self.rej_lo, self.rejection_rate, self.rej_hi)):
            if point is None:
                continue
            # bands are clamped to [0, 1]; allow for rounding at the clamp
            if not lo - 1e-12 <= point <= hi + 1e-12:
                raise ValueError("confidence band must contain its point estimate")
        if self.rejection_rate is not None and not 0.0 <= self.rejection_rate <= 1.0:
            raise ValueError("rejection rate must lie in [0, 1]")
        return self


class CurveSet(BaseModel):
    n_mc: int = Field(ge=1)
    rows: tuple[CurveRow, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_rows(self):
        if any(row.n_valid > self.n_mc for row in self.rows):
            raise ValueError("n_valid cannot exceed the number of replications")
        return self

    def select(self, test: TestName, comparison: str) -> list[CurveRow]:
        return [r for r in self.rows if r.test is test and r.comparison == comparison]
