import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class TestName(str, Enum):
    __test__ = False

    kruskal_wallis = "kruskal_wallis"
    anova_f_hov = "anova_f_hov"
    anova_f_welch = "anova_f_welch"
    wilcoxon = "wilcoxon"
    welch_t = "welch_t"
    ks_two_sample = "ks_two_sample"
    lilliefors = "lilliefors"

    @property
    def multi_group(self) -> bool:
        return self in MULTI_GROUP_TESTS

    @property
    def pairwise(self) -> bool:
        return self in PAIRWISE_TESTS


MULTI_GROUP_TESTS = frozenset({TestName.kruskal_wallis, TestName.anova_f_hov,
                               TestName.anova_f_welch})
PAIRWISE_TESTS = frozenset({TestName.wilcoxon, TestName.welch_t,
                            TestName.ks_two_sample})
# tests that can run at every censoring step
SWEEP_TESTS = (TestName.kruskal_wallis, TestName.anova_f_hov, TestName.anova_f_welch,
               TestName.wilcoxon, TestName.welch_t)


class Alternative(str, Enum):
    two_sided = "two_sided"
    less = "less"
    greater = "greater"
    not_applicable = "not_applicable"


class Reason(str, Enum):
    empty_group = "empty-group"
    too_few_observations = "too-few-observations"
    all_values_tied = "all-values-tied"
    zero_variance = "zero-variance"
    zero_within_variance = "zero-within-variance"


class TestResult(BaseModel):
    __test__ = False

    test: TestName
    statistic: float = math.nan
    p_value: float = math.nan
    alternative: Alternative = Alternative.not_applicable
    df: Optional[tuple[float, float]] = None
    valid: bool = True
    invalid_reason: Optional[Reason] = None

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_validity(self):
        if self.valid:
            if not 0.0 <= self.p_value <= 1.0:
                raise ValueError("a valid result needs a p-value in [0, 1]")
        elif self.invalid_reason is None:
            raise ValueError("an invalid result needs a reason")
        return self


class RankedPool(BaseModel):
    mid_ranks: np.ndarray
    tie_groups: tuple[tuple[float, int], ...]
    n_total: int = Field(gt=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @property
    def tie_term(self) -> float:
        """Sum of t^3 - t over the tie groups."""
        return float(sum(t ** 3 - t for _, t in self.tie_groups))


class TestCurve(BaseModel):
    """One test evaluated at every step of a censoring schedule."""

    __test__ = False

    test: TestName
    comparison: str
    alternative: Alternative
    statistic: np.ndarray
    df1: np.ndarray
    df2: np.ndarray
    p_value: np.ndarray
    valid: np.ndarray
    reasons: tuple[Optional[Reason], ...]
    counts: np.ndarray  # shape (steps, groups in the comparison)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def result(self, step: int) -> TestResult:
        df = None
        if not math.isnan(self.df1[step]):
            df = (float(self.df1[step]), float(self.df2[step]))
        return TestResult(
            test=self.test,
            statistic=float(self.statistic[step]),
            p_value=float(self.p_value[step]),
            alternative=self.alternative,
            df=df,
            valid=bool(self.valid[step]),
            invalid_reason=self.reasons[step],
        )
