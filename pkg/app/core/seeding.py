"""
Derived random number streams
"""

import zlib
from typing import Union

import numpy as np

SeedLike = Union[int, np.random.Generator]


def as_generator(seed: SeedLike) -> np.random.Generator:
    """Return `seed` itself when it is already a Generator, else a fresh seeded one"""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def stream_seed(seed: int, cycle: int, purpose: str) -> np.random.SeedSequence:
    """Seed sequence for one (master seed, cycle, purpose) triple.

    Streams with different purposes never share draws, so shuffling order in
    training cannot shift the draws used for querying.
    """
    tag = zlib.crc32(purpose.encode("utf-8"))
    # cycle -1 is the oracle; SeedSequence needs nonnegative entropy
    return np.random.SeedSequence([int(seed), int(cycle) + 1, tag])


def derive_seed(seed: int, cycle: int, purpose: str) -> int:
    """Unsigned 32-bit seed drawn from the derived stream"""
    return int(stream_seed(seed, cycle, purpose).generate_state(1)[0])


def derive_rng(seed: int, cycle: int, purpose: str) -> np.random.Generator:
    """Generator for one (master seed, cycle, purpose) triple"""
    return np.random.default_rng(stream_seed(seed, cycle, purpose))
