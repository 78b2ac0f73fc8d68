from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator

from src.schemas.lcdm import Hemisphere
from src.schemas.stats import TestResult


class AnalysisRow(BaseModel):
    hemisphere: Hemisphere
    step: int
    gamma_mm: float
    comparison: str
    result: TestResult
    reliable: bool
    group_counts: tuple[int, ...]
    p_adjusted: Optional[float] = None

    model_config = ConfigDict(frozen=True)

    @property
    def key(self) -> tuple:
        return (self.hemisphere, self.step, self.result.test, self.comparison,
                self.result.alternative)


class AnalysisReport(BaseModel):
    rows: tuple[AnalysisRow, ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_unique(self):
        keys = [row.key for row in self.rows]
        if len(keys) != len(set(keys)):
            raise ValueError("analysis rows must be unique per hemisphere, step, test, "
                             "comparison and alternative")
        return self
