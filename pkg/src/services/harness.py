"""Monte Carlo size and power curves over a censoring schedule."""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from src.schemas.censoring import CensoringSchedule
from src.schemas.simulation import (CurveRow, CurveSet, FrequencyProfile, RemainderPlacement,
                                    SampleSpec, ScenarioConfig)
from src.schemas.stats import SWEEP_TESTS, Alternative, TestName
from src.services import errors
from src.services.simulator import (derive_profile, derive_seed, generate, make_params,
                                    reference_profile)
from src.services.special import norm_ppf
from src.services.sweep import Pair, battery_sweep

logger = logging.getLogger(__name__)

QUICK_N = 2000
QUICK_N_MC = 200

# sample specs and ordered pairs of the two shipped experiments
PRESETS: dict[str, tuple[tuple[SampleSpec, ...], tuple[tuple[str, str], ...]]] = {
    "null-eq10": (
        (SampleSpec(label="X", eta=0, r=1.0), SampleSpec(label="Y", eta=0, r=1.0),
         SampleSpec(label="Z", eta=0, r=1.0)),
        (("X", "Y"), ("X", "Z"), ("Y", "Z")),
    ),
    "alt-eq12": (
        (SampleSpec(label="X", eta=0, r=1.0), SampleSpec(label="Y", eta=0, r=1.2),
         SampleSpec(label="Z", eta=50, r=1.0)),
        (("X", "Y"), ("X", "Z"), ("Z", "Y")),
    ),
}

CurveKey = tuple[TestName, str, Alternative]


def _z(level: float) -> float:
    if not 0 < level < 1:
        raise errors.InvalidParameter(f"confidence level must lie in (0, 1), got {level}")
    return norm_ppf(0.5 + level / 2.0)


def rejection_band(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Normal-approximation binomial band, clamped to [0, 1]."""
    if trials < 1 or not 0 <= successes <= trials:
        raise errors.InvalidCounts(f"need 0 <= successes <= trials and trials >= 1, "
                                   f"got {successes}/{trials}")
    rate = successes / trials
    half = _z(level) * math.sqrt(rate * (1.0 - rate) / trials)
    return max(0.0, rate - half), min(1.0, rate + half)


def mean_band(values: Sequence[float], level: float = 0.95,
              clamp: bool = True) -> tuple[float, float]:
    """Mean plus or minus z * sd / sqrt(n); a single value gives a zero-width band."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise errors.EmptyInput("no values to aggregate")
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    half = _z(level) * sd / math.sqrt(values.size)
    lo, hi = mean - half, mean + half
    if clamp:
        lo, hi = max(0.0, lo), min(1.0, hi)
    return lo, hi


def preset_scenario(name: str, schedule: CensoringSchedule, *, quick: bool = False,
                    n: int | None = None, n_mc: int | None = None, alpha: float = 0.05,
                    level: float = 0.95, master_seed: int = 0,
                    tests: Sequence[TestName] = SWEEP_TESTS,
                    remainder_placement: RemainderPlacement = RemainderPlacement.append
                    ) -> ScenarioConfig:
    """A shipped experiment at full scale (n=10000, N_mc=1000) or ``quick`` scale."""
    if name not in PRESETS:
        raise errors.ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    specs, pairs = PRESETS[name]
    size = n or (QUICK_N if quick else None)
    if size:
        specs = tuple(s.model_copy(update={"n": size}) for s in specs)
    return build_scenario(specs, schedule, n_mc=n_mc or (QUICK_N_MC if quick else 1000),
                          alpha=alpha, level=level, tests=tests, pairs=pairs,
                          master_seed=master_seed, remainder_placement=remainder_placement)


def parse_sample_spec(text: str) -> SampleSpec:
    """``LABEL:ETA:R:N``, e.g. ``Z:50:1.0:10000``."""
    parts = text.split(":")
    if len(parts) != 4:
        raise errors.ConfigError(f"a sample is written LABEL:ETA:R:N, got {text!r}")
    label, eta, r, n = parts
    try:
        return SampleSpec(label=label, eta=int(eta), r=float(r), n=int(n))
    except ValueError as err:
        # pydantic's ValidationError is a ValueError too
        raise errors.ConfigError(f"invalid sample {text!r}: {err}") from err


def build_scenario(specs: Sequence[SampleSpec], schedule: CensoringSchedule, **fields
                   ) -> ScenarioConfig:
    try:
        return ScenarioConfig(sample_specs=tuple(specs), schedule=schedule,
                              **{k: v for k, v in fields.items() if v is not None})
    except ValidationError as err:
        issue = err.errors()[0]
        where = ".".join(str(part) for part in issue["loc"])
        raise errors.ConfigError(f"{where or 'scenario'}: {issue['msg']}") from err


def _profiles(config: ScenarioConfig) -> dict[str, FrequencyProfile]:
    reference = reference_profile()
    return {s.label: derive_profile(reference, s.eta, config.remainder_placement)
            for s in config.sample_specs}


def _replicate(config: ScenarioConfig, profiles: dict[str, FrequencyProfile],
               replication: int) -> tuple[list[CurveKey], np.ndarray]:
    """p-values of one replication, shape (curves, steps), NaN where invalid."""
    samples = {}
    for spec in config.sample_specs:
        params = make_params(spec.eta, spec.r, spec.n,
                             derive_seed(config.master_seed, replication, spec.label))
        samples[spec.label] = generate(profiles[spec.label], params).distances
    pairs = [Pair(*p) for p in config.pairs] or None
    curves = battery_sweep(samples, config.schedule.gammas, config.tests, pairs,
                           (config.alternative,))
    keys = [(c.test, c.comparison, c.alternative) for c in curves]
    return keys, np.stack([np.where(c.valid, c.p_value, np.nan) for c in curves])


def aggregate(keys: Sequence[CurveKey], p_values: np.ndarray, config: ScenarioConfig) -> CurveSet:
    """Reduce p-values of shape (replications, curves, steps) into curve rows."""
    rows = []
    for c, (test, comparison, alternative) in enumerate(keys):
        for step in config.schedule.steps:
            column = p_values[:, c, step.k]
            observed = column[~np.isnan(column)]
            n_valid = int(observed.size)
            if n_valid == 0:
                rows.append(CurveRow(step=step.k, gamma_mm=step.gamma, test=test,
                                     comparison=comparison, alternative=alternative, n_valid=0))
                continue
            rejections = int(np.count_nonzero(observed < config.alpha))
            p_lo, p_hi = mean_band(observed, config.level)
            rej_lo, rej_hi = rejection_band(rejections, n_valid, config.level)
            rows.append(CurveRow(
                step=step.k, gamma_mm=step.gamma, test=test, comparison=comparison,
                alternative=alternative, mean_p=float(np.mean(observed)), p_lo=p_lo, p_hi=p_hi,
                rejection_rate=rejections / n_valid, rej_lo=rej_lo, rej_hi=rej_hi,
                n_valid=n_valid))
    return CurveSet(n_mc=config.n_mc, rows=tuple(rows))


def run_scenario(config: ScenarioConfig, threads: int = 1) -> CurveSet:
    """Replicate the scenario ``config.n_mc`` times and aggregate per curve and step.

    Replication ``i`` draws every sample from ``derive_seed(master_seed, i, label)``,
    so the result does not depend on ``threads``.
    """
    unknown = [t.value for t in config.tests if t not in SWEEP_TESTS]
    if unknown:
        raise errors.ConfigError(f"tests {unknown} cannot run per censoring step")
    if threads < 1:
        raise errors.ConfigError(f"threads must be at least 1, got {threads}")
    profiles = _profiles(config)
    work = partial(_replicate, config, profiles)
    replications = range(config.n_mc)
    report_every = max(1, config.n_mc // 10)
    keys: list[CurveKey] = []
    p_values: np.ndarray | None = None

    def collect(results):
        nonlocal keys, p_values
        for i, (rep_keys, matrix) in enumerate(results):
            if p_values is None:
                keys = rep_keys
                p_values = np.empty((config.n_mc,) + matrix.shape)
            p_values[i] = matrix
            if (i + 1) % report_every == 0:
                logger.info("replication %d/%d", i + 1, config.n_mc)

    logger.info("running %d replications of %d samples on %d worker(s)",
                config.n_mc, len(config.sample_specs), threads)
    if threads == 1:
        collect(map(work, replications))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunk = max(1, config.n_mc // (threads * 4))
            collect(pool.map(work, replications, chunksize=chunk))
    return aggregate(keys, p_values, config)
