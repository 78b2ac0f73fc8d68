import numpy as np
import pytest

from src.schemas.stats import SWEEP_TESTS, Alternative, Reason, TestName
from src.services import errors
from src.services.stat_tests import anova_f, kruskal_wallis, welch_t, wilcoxon_rank_sum
from src.services.sweep import ALL_GROUPS, Pair, battery_sweep, default_pairs

LESS, GREATER = Alternative.less, Alternative.greater


@pytest.fixture
def samples(rng):
    # two-decimal rounding leaves plenty of ties
    return {
        "X": np.sort(np.round(rng.uniform(0.0, 5.0, 400), 2)),
        "Y": np.sort(np.round(rng.uniform(0.1, 5.4, 350), 2)),
        "Z": np.sort(np.round(np.clip(rng.gamma(3.0, 0.6, 300), 0.0, 5.5), 2)),
    }


def scalar(test, comparison, alternative, prefixes):
    if test is TestName.kruskal_wallis:
        return kruskal_wallis(list(prefixes.values()))
    if test is TestName.anova_f_hov:
        return anova_f(list(prefixes.values()), hov=True)
    if test is TestName.anova_f_welch:
        return anova_f(list(prefixes.values()), hov=False)
    pair = Pair.parse(comparison)
    x, y = prefixes[pair.first], prefixes[pair.second]
    if test is TestName.wilcoxon:
        return wilcoxon_rank_sum(x, y, alternative)
    return welch_t(x, y, alternative)


class TestBatterySweep:
    def test_curve_layout(self, samples, schedule):
        curves = battery_sweep(samples, schedule.gammas)
        assert [(c.test, c.comparison) for c in curves[:3]] == [
            (TestName.kruskal_wallis, ALL_GROUPS), (TestName.anova_f_hov, ALL_GROUPS),
            (TestName.anova_f_welch, ALL_GROUPS)]
        assert {c.comparison for c in curves[3:]} == {"X:Y", "X:Z", "Y:Z"}
        assert len(curves) == 3 + 3 * 2
        assert all(c.p_value.shape == (551,) for c in curves)

    def test_final_step_identical_to_direct_calls(self, samples, schedule):
        """With every distance retained the sweep and the scalar tests agree to the bit."""
        last = len(schedule) - 1
        assert schedule.gammas[-1] >= max(s[-1] for s in samples.values())
        for curve in battery_sweep(samples, schedule.gammas):
            swept = curve.result(last)
            direct = scalar(curve.test, curve.comparison, curve.alternative, samples)
            assert swept.statistic == direct.statistic
            assert swept.p_value == direct.p_value
            assert (swept.df is None) == (direct.df is None)
            if swept.df is not None:
                np.testing.assert_array_equal(swept.df, direct.df)

    def test_every_step_matches_direct_calls(self, samples, coarse_schedule):
        curves = battery_sweep(samples, coarse_schedule.gammas)
        for k, gamma in enumerate(coarse_schedule.gammas):
            prefixes = {label: s[s <= gamma] for label, s in samples.items()}
            for curve in curves:
                swept = curve.result(k)
                try:
                    direct = scalar(curve.test, curve.comparison, curve.alternative, prefixes)
                except errors.DataError:
                    assert not swept.valid
                    continue
                assert swept.valid == direct.valid
                if swept.valid:
                    assert swept.statistic == pytest.approx(direct.statistic, rel=1e-12)
                    assert swept.p_value == pytest.approx(direct.p_value, rel=1e-12, abs=1e-15)

    def test_counts(self, samples, coarse_schedule):
        curves = battery_sweep(samples, coarse_schedule.gammas)
        kw = curves[0]
        assert kw.counts.shape == (12, 3)
        np.testing.assert_array_equal(kw.counts[:, 0],
                                      [np.count_nonzero(samples["X"] <= g)
                                       for g in coarse_schedule.gammas])
        pair = next(c for c in curves if c.comparison == "Y:Z")
        np.testing.assert_array_equal(pair.counts, kw.counts[:, [1, 2]])

    def test_empty_step_is_flagged(self, coarse_schedule):
        curves = battery_sweep({"A": np.array([0.7, 1.2]), "B": np.array([0.2, 1.4])},
                               coarse_schedule.gammas, pairs=[Pair("A", "B")])
        for curve in curves:
            assert not curve.valid[0]
            assert curve.reasons[0] is Reason.empty_group
            assert np.isnan(curve.p_value[0])

    def test_ties_inside_prefix(self, coarse_schedule):
        curves = battery_sweep({"A": np.array([1.0, 1.0, 1.0]), "B": np.array([1.0, 1.0])},
                               coarse_schedule.gammas, tests=(TestName.kruskal_wallis,))
        assert curves[0].reasons[2] is Reason.all_values_tied

    def test_alternatives(self, samples, coarse_schedule):
        curves = battery_sweep(samples, coarse_schedule.gammas, tests=(TestName.wilcoxon,),
                               pairs=[Pair("X", "Z")], alternatives=(LESS, GREATER))
        less, greater = curves
        assert (less.alternative, greater.alternative) == (LESS, GREATER)
        ok = less.valid & greater.valid
        np.testing.assert_allclose(less.p_value[ok] + greater.p_value[ok], 1.0, atol=1e-15)

    def test_explicit_pair_order(self, samples, coarse_schedule):
        curves = battery_sweep(samples, coarse_schedule.gammas, tests=(TestName.welch_t,),
                               pairs=[Pair("Z", "X")])
        assert [c.comparison for c in curves] == ["Z:X"]

    def test_single_group(self, schedule):
        with pytest.raises(errors.TooFewGroups):
            battery_sweep({"A": np.array([1.0])}, schedule.gammas)

    def test_not_a_sweep_test(self, samples, schedule):
        with pytest.raises(errors.ConfigError):
            battery_sweep(samples, schedule.gammas, tests=(TestName.ks_two_sample,))

    def test_unknown_pair(self, samples, schedule):
        with pytest.raises(errors.ConfigError):
            battery_sweep(samples, schedule.gammas, pairs=[Pair("X", "Q")])

    def test_default_tests(self):
        assert set(SWEEP_TESTS) == {TestName.kruskal_wallis, TestName.anova_f_hov,
                                    TestName.anova_f_welch, TestName.wilcoxon,
                                    TestName.welch_t}


class TestPair:
    def test_parse(self):
        assert Pair.parse("CTRL:AD") == Pair("CTRL", "AD")
        assert Pair("CTRL", "AD").label == "CTRL:AD"

    @pytest.mark.parametrize("text", ["CTRL", "CTRL:", ":AD", "AD:AD"])
    def test_parse_invalid(self, text):
        with pytest.raises(errors.ConfigError):
            Pair.parse(text)

    def test_default_pairs(self):
        assert default_pairs(["A", "B", "C"]) == [Pair("A", "B"), Pair("A", "C"), Pair("B", "C")]
