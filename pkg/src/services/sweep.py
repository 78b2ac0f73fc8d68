"""Run the test battery across every step of a censoring schedule.

A censored view is a prefix of a sorted sample, and the censored pool of several
groups is a prefix of their sorted union, so each group is sorted and ranked once
and every per-step quantity is read off cumulative sums.
"""
from itertools import combinations
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from src.schemas.stats import SWEEP_TESTS, Alternative, TestCurve, TestName
from src.services import errors
from src.services.censoring import sweep_counts
from src.services.stat_tests import (CoreResult, PoolRanking, anova_core, group_moments,
                                     kruskal_core, prefix_moments, welch_anova_core,
                                     welch_t_core, wilcoxon_core)

ALL_GROUPS = "all"


class Pair(NamedTuple):
    first: str
    second: str

    @property
    def label(self) -> str:
        return f"{self.first}:{self.second}"

    @classmethod
    def parse(cls, text: str) -> "Pair":
        first, sep, second = text.partition(":")
        if not sep or not first or not second or first == second:
            raise errors.ConfigError(f"a pair is written FIRST:SECOND, got {text!r}")
        return cls(first, second)


def default_pairs(labels: Sequence[str]) -> list[Pair]:
    return [Pair(a, b) for a, b in combinations(labels, 2)]


def _curve(test: TestName, comparison: str, alternative: Alternative, core: CoreResult,
           counts: np.ndarray) -> TestCurve:
    return TestCurve(test=test, comparison=comparison, alternative=alternative,
                     statistic=core.statistic, df1=core.df1, df2=core.df2,
                     p_value=core.p_value, valid=core.valid, reasons=tuple(core.reasons),
                     counts=counts)


def battery_sweep(samples: Mapping[str, np.ndarray], gammas: np.ndarray,
                  tests: Sequence[TestName] = SWEEP_TESTS,
                  pairs: Sequence[Pair] | None = None,
                  alternatives: Sequence[Alternative] = (Alternative.less,)) -> list[TestCurve]:
    """Evaluate ``tests`` at every threshold in ``gammas``.

    ``samples`` maps group labels to sorted distance arrays; multi-group tests use
    every group in mapping order, pairwise tests use ``pairs`` (default: every
    pair in mapping order).
    """
    labels = list(samples)
    if len(labels) < 2:
        raise errors.TooFewGroups(f"need at least 2 groups, got {len(labels)}")
    unknown = [t for t in tests if t not in SWEEP_TESTS]
    if unknown:
        raise errors.ConfigError(f"tests {[t.value for t in unknown]} do not run per censoring step")
    arrays = [np.asarray(samples[label], dtype=np.float64) for label in labels]
    counts = np.stack([sweep_counts(a, gammas) for a in arrays], axis=1)
    curves: list[TestCurve] = []

    if TestName.kruskal_wallis in tests:
        pool = PoolRanking.build(arrays)
        totals = counts.sum(axis=1)
        sums = np.stack([pool.rank_sums(j, totals) for j in range(len(arrays))], axis=1)
        core = kruskal_core(counts.astype(np.float64), sums, pool.tie_terms(totals))
        curves.append(_curve(TestName.kruskal_wallis, ALL_GROUPS,
                             Alternative.not_applicable, core, counts))
    if TestName.anova_f_hov in tests or TestName.anova_f_welch in tests:
        moments = group_moments(arrays, counts)
        if TestName.anova_f_hov in tests:
            curves.append(_curve(TestName.anova_f_hov, ALL_GROUPS, Alternative.not_applicable,
                                 anova_core(moments), counts))
        if TestName.anova_f_welch in tests:
            curves.append(_curve(TestName.anova_f_welch, ALL_GROUPS, Alternative.not_applicable,
                                 welch_anova_core(moments), counts))

    for pair in pairs if pairs is not None else default_pairs(labels):
        if pair.first not in samples or pair.second not in samples:
            raise errors.ConfigError(f"pair {pair.label} names an unknown group")
        i, j = labels.index(pair.first), labels.index(pair.second)
        pair_counts = counts[:, [i, j]]
        if TestName.wilcoxon in tests:
            pool = PoolRanking.build([arrays[i], arrays[j]])
            totals = pair_counts.sum(axis=1)
            rank_sums = pool.rank_sums(0, totals)
            tie_terms = pool.tie_terms(totals)
            for alternative in alternatives:
                core = wilcoxon_core(pair_counts[:, 0].astype(np.float64),
                                     pair_counts[:, 1].astype(np.float64),
                                     rank_sums, tie_terms, alternative)
                curves.append(_curve(TestName.wilcoxon, pair.label, alternative, core,
                                     pair_counts))
        if TestName.welch_t in tests:
            mx = prefix_moments(arrays[i], pair_counts[:, 0])
            my = prefix_moments(arrays[j], pair_counts[:, 1])
            for alternative in alternatives:
                curves.append(_curve(TestName.welch_t, pair.label, alternative,
                                     welch_t_core(mx, my, alternative), pair_counts))
    return curves
