"""Compiled-versus-pure kernel timings.

Run as `python3 bench/bench_backends.py`. Workloads are deterministic and
identical across lanes: the DFS jobs are node-budget bound, so both lanes
do exactly the same number of nodes.
"""
import random
import sys
import time

from egyfrac import _backend, _kernels_py

if not _backend.COMPILED:
    sys.exit("compiled lane not available; build the extension first")

from egyfrac import _kernels


def timed(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_sieve():
    lo, hi = 1, 2_000_000
    tc, a = timed(_kernels.pstar_range, lo, hi)
    tp, b = timed(_kernels_py.pstar_range, lo, hi)
    assert (a == b).all()
    return "pstar_range 1..2e6", tc, tp


def bench_dfs():
    job = (1, 1, 2, 36, 0, 2_000_000, 0)  # free mode, budget-bound
    tc, rc = timed(_kernels.dfs_solutions, *job)
    tp, rp = timed(_kernels_py.dfs_solutions, *job)
    assert rc == rp
    return f"dfs 2e6 nodes (found {len(rc[2])})", tc, tp


def bench_subset():
    rng = random.Random(3)
    jobs = [
        ([rng.randrange(0, 97) for _ in range(12)], 97, rng.randrange(0, 97))
        for _ in range(2000)
    ]

    def run(mod):
        return [mod.subset_inverse_dp(invs, n, t) for invs, n, t in jobs]

    tc, rc = timed(run, _kernels)
    tp, rp = timed(run, _kernels_py)
    assert rc == rp
    return "subset dp x2000 mod 97", tc, tp


def main():
    rows = [bench_sieve(), bench_dfs(), bench_subset()]
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'cython':>9}  {'python':>9}  speedup")
    for name, tc, tp in rows:
        print(f"{name:<{width}}  {tc:>8.3f}s  {tp:>8.3f}s  {tp / tc:>6.1f}x")


if __name__ == "__main__":
    main()
