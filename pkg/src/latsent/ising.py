"""Ising prior over expressed sentiments and its partition functions.

Energy convention: each edge is counted once,

    energy(x, t) = theta * sum_{(i,j) in E} x_i x_j + gamma * t * sum_i x_i

so a coupling written as ``theta * x^T A x`` (each edge twice) corresponds to
``2 * theta`` here. All ``log_Z_*`` functions return the bare sum
``log sum_x exp(theta * edge_sum(x) + h * sum(x))`` without the channel
factor ``(2 cosh eps)^n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp

from . import _kernels
from .graph import Network

BRUTE_MAX_N = 24


class SizeGuardError(ValueError):
    """Exact enumeration requested for a graph that is too large."""


@dataclass(frozen=True)
class ModelParams:
    theta: float
    gamma: float
    epsilon: float

    def __post_init__(self):
        for name in ("theta", "gamma", "epsilon"):
            v = getattr(self, name)
            if not v >= 0 or math.isnan(v):
                raise ValueError(f"{name} must be >= 0, got {v}")

    @classmethod
    def from_pbsc(cls, theta: float, gamma: float, pbsc: float) -> "ModelParams":
        from .channel import epsilon_from_pbsc
        return cls(theta, gamma, epsilon_from_pbsc(pbsc))

    @property
    def c(self) -> float:
        return 2.0 * math.cosh(self.epsilon)


def as_spins(values, n: int | None = None) -> np.ndarray:
    x = np.asarray(values)
    if x.ndim != 1:
        raise ValueError("spin vector must be one-dimensional")
    if not np.all((x == 1) | (x == -1)):
        raise ValueError("spin entries must be +1 or -1")
    if n is not None and len(x) != n:
        raise ValueError(f"spin vector has length {len(x)}, network has {n} nodes")
    return x.astype(np.int8)


def spins_to_code(x) -> int:
    """Configuration index: bit i set where x_i = -1."""
    x = np.asarray(x)
    return int(np.sum((x < 0).astype(np.int64) << np.arange(len(x), dtype=np.int64)))


def codes_to_spins(codes, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    bits = (codes[..., None] >> np.arange(n, dtype=np.int64)) & 1
    return (1 - 2 * bits).astype(np.int8)


def spins_to_codes(xs) -> np.ndarray:
    xs = np.asarray(xs)
    n = xs.shape[-1]
    return ((xs < 0).astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=-1)


def edge_sum(x, g: Network) -> int:
    x = as_spins(x, g.n)
    ei, ej = g.edge_arrays
    return int(np.sum(x[ei].astype(np.int64) * x[ej]))


def energy(x, t: int, g: Network, p: ModelParams) -> float:
    if t not in (-1, 1):
        raise ValueError(f"latent bit must be +1 or -1, got {t}")
    x = as_spins(x, g.n)
    return p.theta * edge_sum(x, g) + p.gamma * t * float(np.sum(x, dtype=np.int64))


def _check_brute(g: Network, limit: int = BRUTE_MAX_N):
    if g.n > limit:
        raise SizeGuardError(f"exact enumeration limited to n <= {limit}, got n={g.n}")


@lru_cache(maxsize=64)
def density_of_states(g: Network):
    """Nonzero cells of the (edge_sum, magnetization) histogram.

    Returns ``(log_count, edge_sum, magnetization)`` flat arrays. Counts are
    exact integers, so every partition sum derived from them is independent
    of how the enumeration was split.
    """
    _check_brute(g)
    hist = _kernels.state_histogram(g)
    m = g.num_edges
    rows, cols = np.nonzero(hist)
    return (np.log(hist[rows, cols].astype(np.float64)),
            (rows - m).astype(np.float64),
            (g.n - 2 * cols).astype(np.float64))


@lru_cache(maxsize=8)
def state_table(g: Network):
    """``(edge_sum, popcount)`` per configuration index, for n <= 24."""
    _check_brute(g)
    return _kernels.state_arrays(g)


def log_Z_brute(g: Network, theta: float, h):
    """Exact log partition sum by enumerating all ``2**n`` configurations.

    ``h`` may be an array; the result broadcasts over it.
    """
    logc, es, mag = density_of_states(g)
    h = np.asarray(h, dtype=np.float64)
    out = logsumexp(logc + theta * es + h[..., None] * mag, axis=-1)
    return float(out) if out.ndim == 0 else out


def _log2cosh(a):
    a = np.abs(a)
    return a + np.log1p(np.exp(-2.0 * a))


def _check_theta(theta):
    if not theta >= 0:
        raise ValueError(f"closed forms need theta >= 0, got {theta}")


def log_Z_complete(n: int, theta: float, h):
    if n < 1:
        raise ValueError(f"complete graph needs n >= 1, got {n}")
    _check_theta(theta)
    m = np.arange(n + 1)
    s = (n - 2 * m).astype(np.float64)
    log_binom = gammaln(n + 1) - gammaln(m + 1) - gammaln(n - m + 1)
    h = np.asarray(h, dtype=np.float64)
    out = logsumexp(log_binom + 0.5 * theta * (s * s - n) + h[..., None] * s, axis=-1)
    return float(out) if out.ndim == 0 else out


def log_Z_ring(n: int, theta: float, h):
    """Closed chain via the two transfer-matrix eigenvalues.

    ``lambda_+ * lambda_- = 2 sinh(2 theta)`` gives the smaller eigenvalue
    without cancellation.
    """
    if n < 3:
        raise ValueError(f"closed chain needs n >= 3, got {n}")
    _check_theta(theta)
    a = np.abs(np.asarray(h, dtype=np.float64))
    q = np.exp(-2.0 * a)
    log_lp = theta + a + np.log(0.5 * (1 + q) + np.sqrt((0.5 * (1 - q)) ** 2 + np.exp(-4.0 * theta - 2.0 * a)))
    if theta == 0:
        out = n * log_lp
    else:
        log_lm = math.log(2.0 * math.sinh(2.0 * theta)) - log_lp
        out = n * log_lp + np.log1p(np.exp(n * (log_lm - log_lp)))
    return float(out) if np.ndim(out) == 0 else out


def log_Z_star(n: int, theta: float, h):
    """Star: condition on the hub spin, the leaves then factorize."""
    if n < 2:
        raise ValueError(f"star needs n >= 2, got {n}")
    _check_theta(theta)
    h = np.asarray(h, dtype=np.float64)
    out = np.logaddexp(h + (n - 1) * _log2cosh(theta + h),
                       -h + (n - 1) * _log2cosh(theta - h))
    return float(out) if out.ndim == 0 else out


CLOSED_FORMS = {"complete": log_Z_complete, "ring": log_Z_ring, "star": log_Z_star}


def has_closed_form(g: Network) -> bool:
    return g.topology_tag in CLOSED_FORMS


def log_partition(g: Network, theta: float, h, method: str = "auto"):
    """``log_Z`` for ``g``; ``method`` is ``auto``, ``closed`` or ``brute``."""
    if method == "brute":
        return log_Z_brute(g, theta, h)
    if has_closed_form(g):
        return CLOSED_FORMS[g.topology_tag](g.n, theta, h)
    if method == "closed":
        raise ValueError(f"no closed form for topology {g.topology_tag!r}")
    return log_Z_brute(g, theta, h)


def log_conditional_prob(x, t: int, g: Network, p: ModelParams) -> float:
    return energy(x, t, g, p) - log_partition(g, p.theta, p.gamma * t)


def log_conditional_table(g: Network, p: ModelParams, t: int) -> np.ndarray:
    """log p(x | t) for every configuration index; n <= 24."""
    es, pc = state_table(g)
    w = p.theta * es + p.gamma * t * (g.n - 2 * pc.astype(np.float64))
    return w - logsumexp(w)
