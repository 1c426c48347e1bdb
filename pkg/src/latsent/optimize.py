"""Bounded scalar minimisation: coarse grid, then golden-section refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class NumericalDomainError(FloatingPointError):
    """Objective produced a non-finite value."""


@dataclass
class Minimum:
    x: float
    fx: float
    evaluations: int


def golden_section(f: Callable[[float], float], lo: float, hi: float,
                   tol: float = 1e-10, max_iter: int = 200) -> Minimum:
    """Minimise a unimodal ``f`` on ``[lo, hi]`` until the bracket is below ``tol``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    if fc <= fd:
        return Minimum(c, fc, evals)
    return Minimum(d, fd, evals)


def grid_then_golden(f: Callable[[float], float], f_grid: Callable[[np.ndarray], np.ndarray],
                     half_width: float = 8.0, step: float = 0.05,
                     tol: float = 1e-10) -> Minimum:
    """Global search on a symmetric grid (0 included exactly), then refine.

    The refinement brackets the best grid point by its neighbours, which
    handles a non-convex objective as long as grid spacing resolves its
    basins. The result is never worse than the best grid point.
    """
    k = int(round(half_width / step))
    xs = step * np.arange(-k, k + 1)
    vals = np.asarray(f_grid(xs), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise NumericalDomainError("objective is not finite on the search grid")
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    ref = golden_section(f, float(lo), float(hi), tol=tol)
    evals = len(xs) + ref.evaluations
    if ref.fx <= vals[i]:
        return Minimum(ref.x, ref.fx, evals)
    return Minimum(float(xs[i]), float(vals[i]), evals)
