"""Stacked-uniform generator of synthetic distance samples.

A distance is ``(J + U) / 2`` with ``J`` a stack index drawn from a frequency
profile and ``U`` uniform on ``[0, r)``; unit-width stacks become 0.5 mm layers.
"""
import hashlib
import logging

import numpy as np
from pydantic import ValidationError

from src.schemas.lcdm import DistanceSet, Hemisphere
from src.schemas.simulation import (MAX_ETA, REFERENCE_STACKS, FrequencyProfile,
                                    GeneratorParams, RemainderPlacement)
from src.services import errors

logger = logging.getLogger(__name__)


def reference_profile() -> FrequencyProfile:
    return FrequencyProfile(stacks=REFERENCE_STACKS)


def derive_profile(reference: FrequencyProfile, eta: int,
                   remainder_placement: RemainderPlacement = RemainderPlacement.append
                   ) -> FrequencyProfile:
    """Shift every stack count by ``eta`` and add a remainder stack that keeps the total.

    Entries are ``|v_i - eta|`` sorted in descending order; the remainder is
    appended after them, or merged into the sort with ``RemainderPlacement.sorted``.
    """
    limit = max(reference.stacks)
    if not 0 <= eta < limit:
        raise errors.EtaOutOfRange(f"eta must lie in [0, {limit}), got {eta}")
    shifted = sorted((abs(v - eta) for v in reference.stacks), reverse=True)
    remainder = reference.total - sum(shifted)
    if remainder < 0:
        raise errors.EtaOutOfRange(
            f"eta={eta} shifts the stacks past the profile total {reference.total}")
    stacks = shifted + [remainder]
    if RemainderPlacement(remainder_placement) is RemainderPlacement.sorted:
        stacks.sort(reverse=True)
    return FrequencyProfile(stacks=tuple(stacks))


def make_params(eta: int = 0, r: float = 1.0, n: int = 10_000, seed: int = 0) -> GeneratorParams:
    if not 0 <= eta < MAX_ETA:
        raise errors.EtaOutOfRange(f"eta must lie in [0, {MAX_ETA}), got {eta}")
    try:
        return GeneratorParams(eta=eta, r=r, n=n, seed=seed)
    except ValidationError as err:
        issue = err.errors()[0]
        raise errors.InvalidParams(f"{issue['loc'][0]}: {issue['msg']}") from err


def generate(profile: FrequencyProfile, params: GeneratorParams) -> DistanceSet:
    """Draw ``params.n`` sorted distances; the same seed gives the same sample."""
    if not isinstance(params, GeneratorParams):
        raise errors.InvalidParams(f"expected GeneratorParams, got {type(params).__name__}")
    rng = np.random.default_rng(params.seed)
    stacks = rng.choice(len(profile.stacks), size=params.n, p=np.asarray(profile.probabilities))
    offsets = rng.uniform(0.0, params.r, size=params.n)
    distances = np.sort((stacks + offsets) / 2.0, kind="stable")
    return DistanceSet(subject_id=f"sim-eta{params.eta}-r{params.r:g}-seed{params.seed}",
                       hemisphere=Hemisphere.left, distances=distances, raw_count=params.n)


def mixture_cdf(profile: FrequencyProfile, r: float, x):
    """Exact CDF of the generator output: sum_i p_i * clamp((2x - i) / r, 0, 1)."""
    if not r > 0:
        raise errors.InvalidParams(f"r must be positive, got {r}")
    p = np.asarray(profile.probabilities)
    index = np.arange(p.size)
    xs = np.asarray(x, dtype=np.float64)
    within = np.clip((2.0 * xs[..., None] - index) / r, 0.0, 1.0)
    cdf = np.clip(within @ p, 0.0, 1.0)
    return float(cdf) if cdf.ndim == 0 else cdf


def expected_mean(profile: FrequencyProfile, r: float) -> float:
    p = np.asarray(profile.probabilities)
    return float(np.sum(p * (np.arange(p.size) + r / 2.0)) / 2.0)


def derive_seed(master_seed: int, replication: int, label: str) -> int:
    """Seed of one sample stream.

    ``SeedSequence([master_seed, replication, h])`` where ``h`` is the 64-bit
    little-endian BLAKE2b digest of the UTF-8 label; the first 64-bit word of
    its state is the seed. Independent of execution order.
    """
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    entropy = [int(master_seed), int(replication), int.from_bytes(digest, "little")]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])
