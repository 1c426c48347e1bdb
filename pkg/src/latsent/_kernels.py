"""Hot loops over the 2^n spin configurations, and the Gibbs sweep.

Every kernel exists twice: a numba ``@njit`` version and a vectorised numpy
version. ``LATSENT_DISABLE_NUMBA=1`` (or numba missing) selects the numpy
path at import time. Both paths are importable by name so they can be
compared directly (see ``benchmarks/bench_kernels.py``).

State encoding: configuration index ``k`` has spin ``x_i = +1`` when bit
``i`` of ``k`` is clear and ``-1`` when it is set. So ``sum(x) = n - 2 *
popcount(k)``, and ``y . x = n - 2 * popcount(k ^ ycode)``.
"""

import math
import os

import numpy as np
from scipy.special import logsumexp

_disabled = os.environ.get("LATSENT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _disabled:
        raise ImportError("numba disabled by LATSENT_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA

# numpy path processes this many configurations per block
_CHUNK = 1 << 16


# ---------------------------------------------------------------- numpy path

def _bits(k, n):
    return ((k[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int8)


def state_arrays_numpy(n, ei, ej):
    """Per-configuration edge sum and popcount, for all ``2**n`` states."""
    size = 1 << n
    esum = np.empty(size, dtype=np.int32)
    pc = np.empty(size, dtype=np.int8)
    m = len(ei)
    for start in range(0, size, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        b = _bits(k, n)
        disagree = (b[:, ei] ^ b[:, ej]).sum(axis=1) if m else 0
        esum[start:start + len(k)] = m - 2 * disagree
        pc[start:start + len(k)] = np.bitwise_count(k)
    return esum, pc


def state_histogram_numpy(n, ei, ej):
    """Counts of configurations by (edge_sum + m, popcount), shape (2m+1, n+1)."""
    m = len(ei)
    hist = np.zeros((2 * m + 1, n + 1), dtype=np.int64)
    size = 1 << n
    for start in range(0, size, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        b = _bits(k, n)
        disagree = (b[:, ei] ^ b[:, ej]).sum(axis=1) if m else np.zeros(len(k), np.int64)
        row = 2 * m - 2 * disagree
        flat = row * (n + 1) + np.bitwise_count(k)
        hist += np.bincount(flat, minlength=hist.size).reshape(hist.shape)
    return hist


def log_evidence_numpy(ycodes, n, weights, pc, gamma, eps):
    """For each observation code, ``log sum_x exp(w(x) + eps*y.x +/- gamma*sum(x))``.

    Returns ``(ll_plus, ll_minus)`` arrays aligned with ``ycodes``.
    """
    ycodes = np.asarray(ycodes, dtype=np.int64)
    size = len(weights)
    k = np.arange(size, dtype=np.int64)
    mag = n - 2 * pc.astype(np.float64)
    plus = weights + gamma * mag
    minus = weights - gamma * mag
    out_p = np.empty(len(ycodes))
    out_m = np.empty(len(ycodes))
    rows = max(1, (1 << 22) // size)
    for start in range(0, len(ycodes), rows):
        yc = ycodes[start:start + rows]
        agree = n - 2 * np.bitwise_count(yc[:, None] ^ k[None, :]).astype(np.float64)
        out_p[start:start + rows] = logsumexp(plus + eps * agree, axis=1)
        out_m[start:start + rows] = logsumexp(minus + eps * agree, axis=1)
    return out_p, out_m


def gibbs_numpy(x, indptr, indices, theta, field, uniforms, thin):
    """Systematic-scan heat-bath sweeps, modifying ``x`` in place.

    ``uniforms`` has one row per sweep. Returns the state after every
    ``thin``-th sweep, shape ``(sweeps // thin, n)``.
    """
    sweeps, n = uniforms.shape
    out = np.empty((sweeps // thin, n), dtype=np.int8)
    row = 0
    for s in range(sweeps):
        u = uniforms[s]
        for i in range(n):
            local = field
            for p in range(indptr[i], indptr[i + 1]):
                local += theta * x[indices[p]]
            t = -2.0 * local
            x[i] = 1 if t < 700.0 and u[i] * (1.0 + math.exp(t)) < 1.0 else -1
        if (s + 1) % thin == 0:
            out[row] = x
            row += 1
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _popcount(v):
        c = 0
        while v:
            v &= v - 1
            c += 1
        return c

    @njit(cache=True, nogil=True)
    def state_arrays_numba(n, indptr, indices, m):
        # grows states by their highest set bit: k = k' | (1 << h), so
        # flipping spin h of k' from +1 to -1 changes the edge sum by
        # -2 * sum of neighbour spins in k'
        size = 1 << n
        esum = np.empty(size, dtype=np.int32)
        pc = np.empty(size, dtype=np.int8)
        esum[0] = m
        pc[0] = 0
        h = 0
        for k in range(1, size):
            if k == (1 << (h + 1)):
                h += 1
            base = k ^ (1 << h)
            s = 0
            for p in range(indptr[h], indptr[h + 1]):
                j = indices[p]
                s += 1 - 2 * ((base >> j) & 1)
            esum[k] = esum[base] - 2 * s
            pc[k] = pc[base] + 1
        return esum, pc

    @njit(cache=True, nogil=True)
    def state_histogram_numba(n, indptr, indices, m):
        # Gray-code walk; one spin flip per step
        hist = np.zeros((2 * m + 1, n + 1), dtype=np.int64)
        x = np.ones(n, dtype=np.int64)
        e = m
        ones = 0
        hist[e + m, 0] += 1
        size = 1 << n
        for g in range(1, size):
            i = 0
            while not (g >> i) & 1:
                i += 1
            s = 0
            for p in range(indptr[i], indptr[i + 1]):
                s += x[indices[p]]
            e -= 2 * x[i] * s
            ones += x[i]  # +1 spin becoming -1 adds a set bit
            x[i] = -x[i]
            hist[e + m, ones] += 1
        return hist

    @njit(cache=True, nogil=True)
    def log_evidence_numba(ycodes, n, weights, pc, gamma, eps):
        size = weights.shape[0]
        out_p = np.empty(ycodes.shape[0])
        out_m = np.empty(ycodes.shape[0])
        for r in range(ycodes.shape[0]):
            yc = ycodes[r]
            mp = -np.inf
            mm = -np.inf
            for k in range(size):
                mag = n - 2 * pc[k]
                a = eps * (n - 2 * _popcount(k ^ yc))
                vp = weights[k] + a + gamma * mag
                vm = weights[k] + a - gamma * mag
                if vp > mp:
                    mp = vp
                if vm > mm:
                    mm = vm
            sp = 0.0
            sm = 0.0
            for k in range(size):
                mag = n - 2 * pc[k]
                a = eps * (n - 2 * _popcount(k ^ yc))
                sp += math.exp(weights[k] + a + gamma * mag - mp)
                sm += math.exp(weights[k] + a - gamma * mag - mm)
            out_p[r] = mp + math.log(sp)
            out_m[r] = mm + math.log(sm)
        return out_p, out_m

    @njit(cache=True, nogil=True)
    def gibbs_numba(x, indptr, indices, theta, field, uniforms, thin):
        sweeps, n = uniforms.shape
        out = np.empty((sweeps // thin, n), dtype=np.int8)
        row = 0
        for s in range(sweeps):
            for i in range(n):
                local = field
                for p in range(indptr[i], indptr[i + 1]):
                    local += theta * x[indices[p]]
                t = -2.0 * local
                if t < 700.0 and uniforms[s, i] * (1.0 + math.exp(t)) < 1.0:
                    x[i] = 1
                else:
                    x[i] = -1
            if (s + 1) % thin == 0:
                for i in range(n):
                    out[row, i] = x[i]
                row += 1
        return out


# ---------------------------------------------------------------- dispatch

def state_arrays(g):
    """``(edge_sum, popcount)`` for every configuration of network ``g``."""
    if USE_NUMBA:
        indptr, indices = g.csr
        return state_arrays_numba(g.n, indptr, indices, g.num_edges)
    ei, ej = g.edge_arrays
    return state_arrays_numpy(g.n, ei, ej)


def state_histogram(g):
    if USE_NUMBA:
        indptr, indices = g.csr
        return state_histogram_numba(g.n, indptr, indices, g.num_edges)
    ei, ej = g.edge_arrays
    return state_histogram_numpy(g.n, ei, ej)


def log_evidence(ycodes, n, weights, pc, gamma, eps):
    ycodes = np.ascontiguousarray(ycodes, dtype=np.int64)
    if USE_NUMBA:
        return log_evidence_numba(ycodes, n, weights, pc, float(gamma), float(eps))
    return log_evidence_numpy(ycodes, n, weights, pc, gamma, eps)


def gibbs(x, g, theta, field, uniforms, thin):
    indptr, indices = g.csr
    if USE_NUMBA:
        return gibbs_numba(x, indptr, indices, float(theta), float(field), uniforms, thin)
    return gibbs_numpy(x, indptr, indices, theta, field, uniforms, thin)
