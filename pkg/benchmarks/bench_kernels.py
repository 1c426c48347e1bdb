"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 16] [--repeat 3]
"""

import argparse
import time

import numpy as np

from latsent import _kernels as K
from latsent.graph import make_ring


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not available (or LATSENT_DISABLE_NUMBA is set)")

    g = make_ring(args.n)
    ei, ej = g.edge_arrays
    indptr, indices = g.csr
    es, pc = K.state_arrays_numpy(g.n, ei, ej)
    w = 0.5 * es.astype(np.float64)
    codes = np.random.default_rng(0).integers(0, 1 << g.n, size=256)
    u = np.random.default_rng(1).random((20_000, g.n))

    cases = {
        "state_histogram": (lambda: K.state_histogram_numpy(g.n, ei, ej),
                            lambda: K.state_histogram_numba(g.n, indptr, indices, g.num_edges)),
        "log_evidence (256 obs)": (lambda: K.log_evidence_numpy(codes, g.n, w, pc, 0.5, 0.5),
                                   lambda: K.log_evidence_numba(codes, g.n, w, pc, 0.5, 0.5)),
        "gibbs (20k sweeps)": (lambda: K.gibbs_numpy(np.ones(g.n, np.int8), indptr, indices, 0.5, 0.2, u, 5),
                               lambda: K.gibbs_numba(np.ones(g.n, np.int8), indptr, indices, 0.5, 0.2, u, 5)),
    }
    print(f"ring({g.n}), best of {args.repeat}")
    print(f"{'kernel':<24}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for name, (slow, fast) in cases.items():
        fast()  # compile
        ts, tf = best_of(slow, args.repeat), best_of(fast, args.repeat)
        print(f"{name:<24}{ts:>10.4f}{tf:>10.4f}{ts / tf:>8.1f}x")


if __name__ == "__main__":
    main()
