"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--threads 4]

Cases: the W-stack of a random mixed-level fraction, and exhaustive searches
on the 4^3 full factorial (few distinct GWLPs, kernel bound) and on a random
fraction (nearly every subset is its own group, bookkeeping bound).
"""

import argparse
import itertools
import math
import time

import numpy as np

from oagwlp import Fraction, _backend, build_wstack, exhaustive_search


def random_fraction(rng, n, m, levels=(2, 3, 4)):
    lv = [int(rng.choice(levels)) for _ in range(m)]
    rows = [[int(rng.integers(s)) for s in lv] for _ in range(n)]
    return Fraction.from_codes(lv, rows)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=200, help="runs in the W-stack case")
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    big = random_fraction(rng, args.n, args.m)
    factorial = Fraction.from_codes([4, 4, 4], list(itertools.product(range(4), repeat=3)))
    scattered = random_fraction(rng, 48, 8)
    searches = [("4^3 full factorial, p=4", factorial, 4), ("random n=48 m=8, p=3", scattered, 3)]

    backends = _backend.available()
    print(f"backends: {', '.join(backends)}; threads={args.threads}; best of {args.repeat}")
    timings = {}
    outputs = {}
    for name in backends:
        k = _backend.load(name)
        t, w = best_of(lambda: build_wstack(big, kernels=k), args.repeat)
        timings[(name, "build")] = t
        outputs[(name, "build")] = w
        for label, f, p in searches:
            ws = build_wstack(f, kernels=k)
            t, report = best_of(lambda: exhaustive_search(ws, p, threads=args.threads, kernels=k), args.repeat)
            timings[(name, label)] = t
            outputs[(name, label)] = report

    rows = [(f"build_wstack n={args.n} m={args.m}", "build")] + [(f"search {label} ({math.comb(f.n, p)} subsets)", label) for label, f, p in searches]
    print(f"{'case':<52}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for title, key in rows:
        line = f"{title:<52}" + "".join(f"{timings[(b, key)] * 1e3:10.1f}ms" for b in backends)
        if len(backends) == 2:
            assert outputs[("python", key)] == outputs[("cython", key)], f"backends disagree on {title}"
            line += f"{timings[('python', key)] / timings[('cython', key)]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
