"""Keyed, counter-based random streams.

Every random draw in the package comes from a Philox generator whose key is
derived from a tuple ``(seed, domain, *indices)``. Two streams with different
keys are statistically independent, and a stream depends only on its key, so
work split across threads reproduces the sequential result exactly.
"""

import numpy as np

# domain tags keep streams for different purposes apart
LATENT = 1
CHANNEL = 2
EXACT = 3
GIBBS = 4
TRIALS = 5


def stream(seed: int, *key: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, key)])))
