"""Timing harness for the two hot kernels, compiled path against the
numpy/pure-python fallback that CROSSFLOW_NO_NUMBA selects at import.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 5]

Workloads:
  * orientation search, exhaustive count over the counterexample's 2^20
    assignment space (heavily pruned; the acceptance gate's key instance)
  * orientation search, exhaustive count over the 22-edge jump circulant
    with the zero prescription (weak pruning, the real stress case)
  * orientation search, solve mode on a random 18-edge projective corpus
    instance
  * small-cut scan over an 18-vertex near-4-regular multigraph at cut
    size 5 (2^17 candidate masks)
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from crossflow import _kernels as K
from crossflow.families import gen_circulant_b, gen_counterexample, gen_random_pt
from crossflow.orient import _merged_partial, _oracle_arrays


def _workload_count():
    g, p, dspec = gen_counterexample(0)
    free, lo, hi, cur, und, tgt = _oracle_arrays(g, p, _merged_partial(g, None))
    out = np.zeros(0, dtype=np.int8)

    def run(fn):
        return fn(lo, hi, cur.copy(), und.copy(), tgt, 1, out)

    return run


def _workload_count_wide():
    g = gen_circulant_b(11)
    p = {v: 0 for v in g.vertices}
    free, lo, hi, cur, und, tgt = _oracle_arrays(g, p, {})
    out = np.zeros(0, dtype=np.int8)

    def run(fn):
        return fn(lo, hi, cur.copy(), und.copy(), tgt, 1, out)

    return run


def _workload_solve():
    g, p = gen_random_pt(3, 9)
    free, lo, hi, cur, und, tgt = _oracle_arrays(g, p, {})
    out = np.zeros(len(free), dtype=np.int8)

    def run(fn):
        return fn(lo, hi, cur.copy(), und.copy(), tgt, 0, out)

    return run


def _workload_cuts():
    rng = np.random.default_rng(11)
    n = 18
    iu, iv = [], []
    for v in range(n):
        iu.append(v)
        iv.append((v + 1) % n)
    while len(iu) < 2 * n:
        a, b = rng.integers(0, n, size=2)
        if a != b:
            iu.append(int(a))
            iv.append(int(b))
    iu = np.array(iu, dtype=np.int64)
    iv = np.array(iv, dtype=np.int64)

    def run(fn):
        return fn(iu, iv, n - 1, n, 5, 2)

    return run


def _best(run, fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        run(fn)
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    pairs = [
        ("orient/count CE0", _workload_count(), K.orient_search_py),
        ("orient/count B11", _workload_count_wide(), K.orient_search_py),
        ("orient/solve 18e", _workload_solve(), K.orient_search_py),
        ("cut scan 18v", _workload_cuts(), K.cut_scan_numpy),
    ]
    compiled = None
    if K.USING_NUMBA:
        compiled = [K.orient_search, K.orient_search, K.orient_search, K.cut_scan]
        for (_, run, _), fn in zip(pairs, compiled):
            run(fn)  # jit warmup outside the timed region

    print(f"numba active: {K.USING_NUMBA}   repeats: {args.repeat}")
    header = f"{'workload':<20}{'fallback':>12}"
    if compiled:
        header += f"{'compiled':>12}{'speedup':>10}"
    print(header)
    for i, (name, run, fallback) in enumerate(pairs):
        tf = _best(run, fallback, args.repeat)
        line = f"{name:<20}{tf * 1e3:>10.2f}ms"
        if compiled:
            tc = _best(run, compiled[i], args.repeat)
            line += f"{tc * 1e3:>10.2f}ms{tf / tc:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
