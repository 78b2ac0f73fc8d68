import logging
from typing import Callable, Sequence

from src.schemas.censoring import CensoringSchedule
from src.schemas.lcdm import PooledSample
from src.schemas.report import AnalysisRow
from src.schemas.stats import SWEEP_TESTS, Alternative, Reason, TestName, TestResult
from src.services import errors
from src.services import stat_tests
from src.services.censoring import censor
from src.services.simulator import derive_seed
from src.services.sweep import ALL_GROUPS, Pair, battery_sweep, default_pairs

logger = logging.getLogger(__name__)

ONE_SIDED = (Alternative.less, Alternative.greater)
_REASONS = {
    errors.EmptyGroup: Reason.empty_group,
    errors.EmptyInput: Reason.empty_group,
    errors.InsufficientGroupSize: Reason.too_few_observations,
    errors.ZeroVariance: Reason.zero_variance,
}


def _check(pooled: Sequence[PooledSample], pairs: Sequence[Pair] | None) -> list[Pair]:
    if len(pooled) < 2:
        raise errors.SingleGroup(
            f"{pooled[0].hemisphere.value if pooled else 'this'} hemisphere has fewer than 2 groups")
    labels = [p.group for p in pooled]
    pairs = list(pairs) if pairs else default_pairs(labels)
    for pair in pairs:
        if pair.first not in labels or pair.second not in labels:
            raise errors.ConfigError(f"pair {pair.label} names a group absent from the manifest")
    return pairs


def censored_analysis(pooled: Sequence[PooledSample], schedule: CensoringSchedule,
                      pairs: Sequence[Pair] | None = None) -> list[AnalysisRow]:
    """Multi-group and pairwise ``less`` tests at every censoring step of one hemisphere."""
    pairs = _check(pooled, pairs)
    hemisphere = pooled[0].hemisphere
    samples = {p.group: p.distances for p in pooled}
    curves = battery_sweep(samples, schedule.gammas, SWEEP_TESTS, pairs)
    rows = []
    for step in schedule.steps:
        reliable = schedule.reliable(step.gamma)
        for curve in curves:
            rows.append(AnalysisRow(
                hemisphere=hemisphere, step=step.k, gamma_mm=step.gamma,
                comparison=curve.comparison, result=curve.result(step.k), reliable=reliable,
                group_counts=tuple(int(c) for c in curve.counts[step.k])))
    logger.info("%s: %d steps x %d curves", hemisphere.value, len(schedule), len(curves))
    return rows


def _guarded(test: TestName, alternative: Alternative, fn: Callable[[], TestResult]) -> TestResult:
    try:
        return fn()
    except tuple(_REASONS) as err:
        logger.warning("%s not computed: %s", test.value, err.detail)
        return TestResult(test=test, alternative=alternative, valid=False,
                          invalid_reason=_REASONS[type(err)])


def pooled_analysis(pooled: Sequence[PooledSample], schedule: CensoringSchedule,
                    pairs: Sequence[Pair] | None = None, holm: bool = False,
                    n_mc: int = 1000, seed: int = 0) -> list[AnalysisRow]:
    """The battery plus K-S and Lilliefors on the groups censored at the last step.

    With ``d_max`` at or above the clip bound this is the uncensored pooled comparison.
    """
    pairs = _check(pooled, pairs)
    hemisphere = pooled[0].hemisphere
    step = schedule.steps[-1]
    by_label = {p.group: censor(p, step.gamma, step.k).distances for p in pooled}
    arrays = list(by_label.values())
    all_counts = tuple(a.size for a in arrays)
    na = Alternative.not_applicable
    entries: list[tuple[str, TestResult, tuple[int, ...]]] = [
        (ALL_GROUPS, _guarded(TestName.kruskal_wallis, na,
                              lambda: stat_tests.kruskal_wallis(arrays)), all_counts),
        (ALL_GROUPS, _guarded(TestName.anova_f_hov, na,
                              lambda: stat_tests.anova_f(arrays, hov=True)), all_counts),
        (ALL_GROUPS, _guarded(TestName.anova_f_welch, na,
                              lambda: stat_tests.anova_f(arrays, hov=False)), all_counts),
    ]
    for pair in pairs:
        x, y = by_label[pair.first], by_label[pair.second]
        counts = (x.size, y.size)
        for alternative in ONE_SIDED:
            entries.append((pair.label, _guarded(
                TestName.wilcoxon, alternative,
                lambda: stat_tests.wilcoxon_rank_sum(x, y, alternative)), counts))
            entries.append((pair.label, _guarded(
                TestName.welch_t, alternative,
                lambda: stat_tests.welch_t(x, y, alternative)), counts))
        entries.append((pair.label, _guarded(
            TestName.ks_two_sample, Alternative.two_sided,
            lambda: stat_tests.ks_two_sample(x, y)), counts))
    for label, values in by_label.items():
        group_seed = derive_seed(seed, 0, f"lilliefors:{hemisphere.value}:{label}")
        entries.append((label, _guarded(
            TestName.lilliefors, na,
            lambda: stat_tests.lilliefors(values, n_mc=n_mc, seed=group_seed)), (values.size,)))

    adjusted: dict[int, float] = {}
    if holm:
        families: dict[tuple, list[int]] = {}
        for index, (comparison, result, _) in enumerate(entries):
            if comparison != ALL_GROUPS and result.test.pairwise and result.valid:
                families.setdefault((result.test, result.alternative), []).append(index)
        for members in families.values():
            p = stat_tests.holm_adjust([entries[i][1].p_value for i in members])
            adjusted.update(zip(members, (float(v) for v in p)))

    return [AnalysisRow(hemisphere=hemisphere, step=step.k, gamma_mm=step.gamma,
                        comparison=comparison, result=result,
                        reliable=schedule.reliable(step.gamma), group_counts=counts,
                        p_adjusted=adjusted.get(index))
            for index, (comparison, result, counts) in enumerate(entries)]
