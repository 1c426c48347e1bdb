"""Monte Carlo estimates of the detection error probability.

Trials are grouped in fixed-size blocks. Block ``k`` of the ``t`` conditional
draws everything from the stream keyed ``(seed, TRIALS, t, k)``, so the
error counts do not depend on how blocks are spread over threads.
"""

from __future__ import annotations

import math
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import binomtest

from . import _kernels, rng
from .channel import pbsc_from_epsilon
from .detector import log_likelihood_ratios
from .graph import Network
from .ising import ModelParams, log_partition, spins_to_codes, state_table
from .sampler import EXACT_MAX_N, draw_codes, exact_cdf, gibbs_chain

BLOCK = 8192
DETECTORS = ("map", "majority")
# MAP decisions are tabulated over all observation codes up to this size
_TABLE_MAX_N = 20


@dataclass(frozen=True)
class ErrorEstimate:
    """Error rate pooled over both latent-bit conditionals.

    ``p_hat`` is the symmetric error probability ``(errors_minus +
    errors_plus) / (2 * trials)``; the interval is 95% Clopper-Pearson on the
    pooled count.
    """

    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    detector_tag: str
    seed: int
    errors_minus: int
    errors_plus: int

    @property
    def p_minus(self) -> float:
        return self.errors_minus / self.trials

    @property
    def p_plus(self) -> float:
        return self.errors_plus / self.trials

    @property
    def pe_symmetric(self) -> float:
        return self.p_hat

    @property
    def halfwidth(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


@dataclass(frozen=True)
class DetectorComparison:
    map: ErrorEstimate
    majority: ErrorEstimate
    map_only_errors: int
    majority_only_errors: int
    p_value: float  # one-sided sign test that MAP errs less often


def clopper_pearson(errors: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    ci = binomtest(errors, trials).proportion_ci(confidence_level=level, method="exact")
    return float(ci.low), float(ci.high)


def _estimate(detector, em, ep, trials, seed):
    lo, hi = clopper_pearson(em + ep, 2 * trials)
    return ErrorEstimate((em + ep) / (2 * trials), lo, hi, trials, detector, seed, em, ep)


class _MapDecisions:
    """MAP decisions by observation code, filled lazily and shared by blocks."""

    def __init__(self, g: Network, p: ModelParams):
        self.g, self.p = g, p
        self.lock = threading.Lock()
        self.table = None
        if g.n <= _TABLE_MAX_N:
            self.table = np.zeros(1 << g.n, dtype=np.int8)  # 0 = unknown

    def __call__(self, ycodes: np.ndarray) -> np.ndarray:
        if self.table is None:
            return np.where(log_likelihood_ratios(ycodes, self.g, self.p) >= 0, 1, -1)
        missing = np.unique(ycodes[self.table[ycodes] == 0])
        if len(missing):
            dec = np.where(log_likelihood_ratios(missing, self.g, self.p) >= 0, 1, -1)
            with self.lock:
                self.table[missing] = dec
        return self.table[ycodes].astype(np.int64)


def _majority(ycodes: np.ndarray, n: int) -> np.ndarray:
    total = n - 2 * np.bitwise_count(ycodes).astype(np.int64)
    return np.where(total >= 0, 1, -1)


class _Trials:
    def __init__(self, g: Network, p: ModelParams, seed: int, detectors):
        self.g, self.p, self.seed = g, p, seed
        self.detectors = tuple(detectors)
        for d in self.detectors:
            if d not in DETECTORS:
                raise ValueError(f"unknown detector {d!r}")
        if "map" in self.detectors:
            if g.topology_tag != "star":
                state_table(g)  # fails early on the size guard
            self.map = _MapDecisions(g, p)
        self.pbsc = pbsc_from_epsilon(p.epsilon)
        self.cdf = {}
        if g.n <= EXACT_MAX_N:
            for t in (-1, 1):
                self.cdf[t] = exact_cdf(g, p, t)

    def block(self, t: int, index: int, count: int):
        """Decisions of every detector on ``count`` fresh trials with latent bit ``t``."""
        gen = rng.stream(self.seed, rng.TRIALS, (t + 1) // 2, index)
        if self.cdf:
            xcodes = draw_codes(self.cdf[t], gen, count)
        else:
            xs = gibbs_chain(self.g, self.p, t, count, 100, 5, gen)
            xcodes = spins_to_codes(xs)
        flips = gen.random((count, self.g.n)) < self.pbsc
        ycodes = xcodes ^ (flips.astype(np.int64) << np.arange(self.g.n)).sum(axis=1)
        out = []
        for d in self.detectors:
            out.append(self.map(ycodes) if d == "map" else _majority(ycodes, self.g.n))
        return out


def _run(g, p, trials, seed, detectors, threads, block):
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    runner = _Trials(g, p, seed, detectors)
    jobs = []
    for t in (-1, 1):
        for k, start in enumerate(range(0, trials, block)):
            jobs.append((t, k, min(block, trials - start)))

    def work(job):
        t, k, count = job
        wrong = [d != t for d in runner.block(t, k, count)]
        disc = (0, 0)
        if len(wrong) == 2:
            disc = (int(np.sum(wrong[0] & ~wrong[1])), int(np.sum(~wrong[0] & wrong[1])))
        return t, [int(w.sum()) for w in wrong], disc

    threads = threads or os.cpu_count() or 1
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]

    errors = {t: np.zeros(len(runner.detectors), dtype=np.int64) for t in (-1, 1)}
    discordant = np.zeros(2, dtype=np.int64)
    for t, counts, disc in results:
        errors[t] += counts
        discordant += disc
    return runner.detectors, errors, discordant


def estimate_pe(g: Network, p: ModelParams, detector: str = "map", trials: int = 10_000,
                seed: int = 0, threads: int | None = 1, block: int = BLOCK) -> ErrorEstimate:
    """Simulate ``trials`` detections under each latent bit and count errors."""
    _, errors, _ = _run(g, p, trials, seed, (detector,), threads, block)
    return _estimate(detector, int(errors[-1][0]), int(errors[1][0]), trials, seed)


def compare_detectors(g: Network, p: ModelParams, trials: int = 10_000, seed: int = 0,
                      threads: int | None = 1, block: int = BLOCK) -> DetectorComparison:
    """MAP and majority on the same sampled (x, y) pairs."""
    dets, errors, disc = _run(g, p, trials, seed, DETECTORS, threads, block)
    est = {d: _estimate(d, int(errors[-1][i]), int(errors[1][i]), trials, seed)
           for i, d in enumerate(dets)}
    map_only, maj_only = int(disc[0]), int(disc[1])
    if map_only + maj_only:
        pval = binomtest(maj_only, map_only + maj_only, 0.5, alternative="greater").pvalue
    else:
        pval = 1.0
    return DetectorComparison(est["map"], est["majority"], map_only, maj_only, float(pval))


def exact_error_probability(g: Network, p: ModelParams) -> float:
    """P(MAP decides +1 | t = -1) by summing over every observation vector.

    Cost is ``4**n`` terms; intended for n up to about 14.
    """
    if math.isinf(p.epsilon):
        raise ValueError("exact error probability needs a noisy channel")
    n = g.n
    codes = np.arange(1 << n, dtype=np.int64)
    es, pc = state_table(g)
    lp, lm = _kernels.log_evidence(codes, n, p.theta * es.astype(np.float64), pc,
                                   p.gamma, p.epsilon)
    log2cosh = p.epsilon + math.log1p(math.exp(-2.0 * p.epsilon))
    log_py = lm - log_partition(g, p.theta, -p.gamma) - n * log2cosh
    decide_plus = log_likelihood_ratios(codes, g, p, method="enumerate") >= 0
    return float(np.exp(log_py)[decide_plus].sum())
