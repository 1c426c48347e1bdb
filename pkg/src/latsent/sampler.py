"""Draw latent bits and sentiment vectors from the Ising prior."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, rng
from .graph import Network
from .ising import ModelParams, SizeGuardError, codes_to_spins, log_conditional_table

EXACT_MAX_N = 20
DEFAULT_BURN_IN = 100
DEFAULT_THIN = 5

# cap on uniforms held in memory at once by the Gibbs driver
_GIBBS_BLOCK = 1 << 22


@dataclass
class SampleBatch:
    t: int
    xs: np.ndarray  # (count, n) int8
    method: str
    seed: int
    burn_in: int = 0
    thin: int = 1


def _tkey(t: int) -> int:
    if t not in (-1, 1):
        raise ValueError(f"latent bit must be +1 or -1, got {t}")
    return (t + 1) // 2


def sample_t(seed: int) -> int:
    return int(2 * rng.stream(seed, rng.LATENT).integers(2) - 1)


def exact_cdf(g: Network, p: ModelParams, t: int) -> np.ndarray:
    """Cumulative distribution over configuration indices, last entry 1."""
    if g.n > EXACT_MAX_N:
        raise SizeGuardError(f"exact sampling limited to n <= {EXACT_MAX_N}, got n={g.n}")
    logp = log_conditional_table(g, p, t)
    cdf = np.cumsum(np.exp(logp - logp.max()))
    return cdf / cdf[-1]


def draw_codes(cdf: np.ndarray, gen: np.random.Generator, count: int) -> np.ndarray:
    idx = np.searchsorted(cdf, gen.random(count), side="right")
    return np.minimum(idx, len(cdf) - 1)


def sample_exact(g: Network, p: ModelParams, t: int, count: int, seed: int) -> SampleBatch:
    cdf = exact_cdf(g, p, t)
    codes = draw_codes(cdf, rng.stream(seed, rng.EXACT, _tkey(t)), count)
    return SampleBatch(t, codes_to_spins(codes, g.n), "exact", seed)


def gibbs_chain(g: Network, p: ModelParams, t: int, count: int,
                burn_in: int, thin: int, gen: np.random.Generator) -> np.ndarray:
    """Run one heat-bath chain and return ``count`` thinned states."""
    if burn_in < 0 or thin < 1 or count < 0:
        raise ValueError("need burn_in >= 0, thin >= 1, count >= 0")
    n = g.n
    x = (2 * gen.integers(2, size=n) - 1).astype(np.int8)
    field = p.gamma * t
    per_block = max(1, _GIBBS_BLOCK // n)

    remaining = burn_in
    while remaining:
        sweeps = min(remaining, per_block)
        _kernels.gibbs(x, g, p.theta, field, gen.random((sweeps, n)), sweeps + 1)
        remaining -= sweeps

    out = np.empty((count, n), dtype=np.int8)
    per_block = max(thin, per_block - per_block % thin)
    done = 0
    while done < count:
        sweeps = min((count - done) * thin, per_block)
        got = _kernels.gibbs(x, g, p.theta, field, gen.random((sweeps, n)), thin)
        out[done:done + len(got)] = got
        done += len(got)
    return out


def sample_gibbs(g: Network, p: ModelParams, t: int, count: int,
                 burn_in: int = DEFAULT_BURN_IN, thin: int = DEFAULT_THIN,
                 seed: int = 0) -> SampleBatch:
    """Single-site heat-bath sampler with a systematic 0..n-1 sweep."""
    gen = rng.stream(seed, rng.GIBBS, _tkey(t))
    xs = gibbs_chain(g, p, t, count, burn_in, thin, gen)
    return SampleBatch(t, xs, "gibbs", seed, burn_in, thin)
