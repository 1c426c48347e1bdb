"""MAP detection of the latent bit from noisy observations.

The log-likelihood ratio marginalises the unobserved sentiments:

    log l(y) = log sum_x exp(theta*E(x) + eps*y.x + gamma*sum(x))
             - log sum_x exp(theta*E(x) + eps*y.x - gamma*sum(x))

The normalisers Z(+1) and Z(-1) are equal (global spin flip) and drop out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Network
from .ising import ModelParams, as_spins, codes_to_spins, spins_to_code, state_table

# |log l| below this (relative) is a tie; enumeration order noise is ~1e-15
TIE_TOL = 1e-12


@dataclass(frozen=True)
class DetectionResult:
    t_hat: int
    log_l: float
    method: str


def _log2cosh(a):
    a = np.abs(a)
    return a + np.log1p(np.exp(-2.0 * a))


def _snap(lp, lm):
    d = lp - lm
    scale = np.maximum(1.0, np.maximum(np.abs(lp), np.abs(lm)))
    return np.where(np.abs(d) <= TIE_TOL * scale, 0.0, d)


def _star_log_evidence(ys, theta, gamma, eps, sign):
    # condition on the hub (node 0); leaves are then independent
    hub, leaves = ys[:, 0], ys[:, 1:]
    terms = []
    for x0 in (1.0, -1.0):
        a = (eps * hub + sign * gamma) * x0
        a = a + _log2cosh(theta * x0 + eps * leaves + sign * gamma).sum(axis=1)
        terms.append(a)
    return np.logaddexp(terms[0], terms[1])


def _resolve_method(g: Network, method: str) -> str:
    if method == "auto":
        return "star" if g.topology_tag == "star" else "enumerate"
    if method == "star" and g.topology_tag != "star":
        raise ValueError("star fast path needs a star network")
    if method not in ("enumerate", "star"):
        raise ValueError(f"unknown likelihood method {method!r}")
    return method


def log_likelihood_ratios(ycodes, g: Network, p: ModelParams, method: str = "auto") -> np.ndarray:
    """Vectorised ``log l(y)`` over an array of configuration codes."""
    ycodes = np.asarray(ycodes, dtype=np.int64)
    if math.isinf(p.epsilon):
        # noiseless: y = x, so l(y) = p(y|+1) / p(y|-1)
        mag = g.n - 2 * np.bitwise_count(ycodes).astype(np.float64)
        return 2.0 * p.gamma * mag
    method = _resolve_method(g, method)
    uniq, inverse = np.unique(ycodes, return_inverse=True)
    if method == "star":
        ys = codes_to_spins(uniq, g.n).astype(np.float64)
        lp = _star_log_evidence(ys, p.theta, p.gamma, p.epsilon, 1.0)
        lm = _star_log_evidence(ys, p.theta, p.gamma, p.epsilon, -1.0)
    else:
        es, pc = state_table(g)
        w = p.theta * es.astype(np.float64)
        lp, lm = _kernels.log_evidence(uniq, g.n, w, pc, p.gamma, p.epsilon)
    return _snap(lp, lm)[inverse.reshape(-1)]


def log_likelihood_ratio(y, g: Network, p: ModelParams, method: str = "auto") -> float:
    y = as_spins(y, g.n)
    return float(log_likelihood_ratios([spins_to_code(y)], g, p, method)[0])


def map_detect(y, g: Network, p: ModelParams, method: str = "auto") -> DetectionResult:
    log_l = log_likelihood_ratio(y, g, p, method)
    return DetectionResult(1 if log_l >= 0 else -1, log_l, "map")


def iid_log_ratio_per_vote(gamma: float, eps: float) -> float:
    """Contribution of one ``y_i = +1`` to log l(y) when theta = 0."""
    if math.isinf(eps):
        return 2.0 * gamma
    return float(_log2cosh(eps + gamma) - _log2cosh(eps - gamma))


def majority_detect(y, p: ModelParams | None = None) -> DetectionResult:
    """Sign of the vote total, ties to +1.

    With ``p`` given, ``log_l`` is the theta = 0 log-likelihood ratio, which
    is the vote total times a positive constant; otherwise it is the bare
    vote total.
    """
    y = as_spins(y)
    total = int(np.sum(y, dtype=np.int64))
    log_l = float(total)
    if p is not None:
        log_l = total * iid_log_ratio_per_vote(p.gamma, p.epsilon) if total else 0.0
    return DetectionResult(1 if total >= 0 else -1, log_l, "majority")
