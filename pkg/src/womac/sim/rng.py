"""
Seeded random streams.

Every random draw in womac comes from a PCG64 generator whose SeedSequence is
derived from the run seed and a tuple of counters:

    derive_seed(seed, *counters) = SeedSequence(entropy=seed, spawn_key=counters)

so replicate r of a run uses derive_seed(seed, r) regardless of which thread
evaluates it or in which order. Streams for distinct counter tuples do not overlap.
"""
from typing import Union

import numpy as np

from womac.errors import ValidationError

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


def derive_seed(seed: int, *counters: int) -> np.random.SeedSequence:
    if isinstance(seed, bool) or int(seed) != seed or seed < 0:
        raise ValidationError(f"seed must be a nonnegative integer, got {seed!r}")
    if any(int(c) != c or c < 0 for c in counters):
        raise ValidationError(f"stream counters must be nonnegative integers, got {counters!r}")
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(c) for c in counters))


def make_rng(seed: SeedLike, *counters: int) -> np.random.Generator:
    """Generator for (seed, *counters); an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(derive_seed(seed, *counters)))
