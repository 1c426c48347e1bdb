"""Per-node binary symmetric channel from true to observed sentiments.

``epsilon = 0.5 * log((1 - p) / p)`` is non-negative for ``p <= 0.5`` so that
a larger ``epsilon`` means a more accurate observation. ``p = 0`` maps to
``epsilon = inf`` (noiseless).
"""

import math

import numpy as np

from . import rng
from .ising import as_spins

NOISELESS = math.inf


def epsilon_from_pbsc(p: float) -> float:
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5], got {p}")
    if p == 0.0:
        return NOISELESS
    return 0.5 * math.log((1.0 - p) / p)


def pbsc_from_epsilon(eps: float) -> float:
    if not eps >= 0:
        raise ValueError(f"epsilon must be >= 0, got {eps}")
    if math.isinf(eps):
        return 0.0
    q = math.exp(-2.0 * eps)
    return q / (1.0 + q)


def flip_uniforms(n: int, seed: int) -> np.ndarray:
    """Uniform draw for node ``i`` is element ``i`` of the keyed stream."""
    return rng.stream(seed, rng.CHANNEL).random(n)


def transmit(x, p: float, seed: int) -> np.ndarray:
    """Flip each coordinate of ``x`` independently with probability ``p``."""
    x = as_spins(x)
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"crossover probability must be in [0, 0.5], got {p}")
    flips = flip_uniforms(len(x), seed) < p
    return np.where(flips, -x, x).astype(np.int8)


def transmit_batch(xs: np.ndarray, p: float, gen: np.random.Generator) -> np.ndarray:
    """Vectorised channel for an ``(m, n)`` batch using an existing stream."""
    flips = gen.random(xs.shape) < p
    return np.where(flips, -xs, xs).astype(np.int8)


def log_likelihood_y_given_x(y, x, eps: float) -> float:
    """log p(y | x) = eps * y.x - n * log(2 cosh eps)."""
    y = as_spins(y)
    x = as_spins(x, len(y))
    n = len(y)
    agree = int(np.dot(y.astype(np.int64), x))
    if math.isinf(eps):
        return 0.0 if agree == n else -math.inf
    log2cosh = eps + math.log1p(math.exp(-2.0 * eps))
    return eps * agree - n * log2cosh
