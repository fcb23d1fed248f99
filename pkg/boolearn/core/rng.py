"""Seeded random streams.

Every stochastic operation takes an explicit integer seed. Child streams are derived
through ``numpy.random.SeedSequence`` so that parallel workers get independent,
reproducible generators regardless of scheduling.
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Generator for a single seeded stream."""
    return np.random.default_rng(np.random.SeedSequence(seed))


def derive_seed(seed: int, index: int) -> int:
    """Stable child seed for worker ``index`` of a master ``seed``."""
    state = np.random.SeedSequence([seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def spawn_seeds(seed: int, count: int) -> list[int]:
    """Child seeds for ``count`` workers."""
    return [derive_seed(seed, i) for i in range(count)]
