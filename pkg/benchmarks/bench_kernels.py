"""Compare the compiled and numpy sieve backends.

    python benchmarks/bench_kernels.py --top 1e7 --repeat 3
"""

import argparse
import time

import numpy as np

from multiquad import arith, kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--top", type=float, default=1e7, help="largest n sieved")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()
    top = int(args.top)
    found = kernels.backends()
    print(f"backends: {', '.join(sorted(found))}; top = {top:,}; threads = {args.threads}")
    print(f"{'backend':8s} {'sieve [1,top)':>14s} {'histogram':>12s} {'n/s (hist)':>12s}")
    results = {}
    for name, mod in sorted(found.items()):
        t_sieve, _ = best_of(lambda: arith.build_sieve(1, top, backend=mod), args.repeat)
        t_hist, hist = best_of(
            lambda: arith.odd_squarefree_histograms([top], threads=args.threads, backend=mod)[top], args.repeat
        )
        results[name] = hist
        print(f"{name:8s} {t_sieve:13.3f}s {t_hist:11.3f}s {top / t_hist:12.3g}")
    hists = list(results.values())
    same = all(np.array_equal(hists[0], h) for h in hists[1:])
    print(f"histograms identical across backends: {same}")


if __name__ == "__main__":
    main()
