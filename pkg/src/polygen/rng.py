"""Seedable, splittable randomness.

All stochastic steps (perturbations, splits, baseline sampling, experiment
draws) run on numpy PCG64 streams derived from a single 64-bit seed through
``SeedSequence.spawn``, so per-sample streams are a pure function of
(seed, sample index) and results never depend on execution order or worker
count.  The algorithm name is recorded in every run config; only "pcg64" is
accepted.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import UsageError

RNG_ALGORITHM = "pcg64"


def require_algorithm(name: str) -> None:
    if name != RNG_ALGORITHM:
        raise UsageError(f"unsupported rng algorithm {name!r}; only {RNG_ALGORITHM!r} is available")


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def child_generators(seed: int, n: int) -> list[np.random.Generator]:
    """n independent streams, deterministically derived from *seed*."""
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def child_generator(seed: int, index: int, n: int) -> np.random.Generator:
    """Stream *index* out of the same family ``child_generators(seed, n)`` yields."""
    child = np.random.SeedSequence(int(seed)).spawn(n)[index]
    return np.random.Generator(np.random.PCG64(child))


def weighted_index(rng: np.random.Generator, weights: Sequence[int]) -> int:
    """Pick an index with probability proportional to integer *weights*.

    Works on integer cumulative sums only, so the draw is exactly
    reproducible (no float rounding enters the choice).
    """
    total = 0
    cumulative = []
    for w in weights:
        total += int(w)
        cumulative.append(total)
    if total <= 0:
        raise ValueError("weights must have positive sum")
    r = int(rng.integers(total))
    for i, c in enumerate(cumulative):
        if r < c:
            return i
    raise AssertionError("unreachable")
