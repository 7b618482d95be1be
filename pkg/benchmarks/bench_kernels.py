"""Compare the numba and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Each case is run once to warm up (numba compiles on first call), then timed
as the best of ``--repeat`` runs. The largest deviation between the two
backends is reported alongside the timings.
"""

import argparse
import time

import numpy as np

from besselterm.kernels import get_backend


def _cases(rng):
    x = rng.uniform(0.0, 200.0, 200_000)
    betas = rng.uniform(0.01, 1.0, 400)
    nodes = np.sort(rng.uniform(0.0, 300.0, 4000))
    weights = rng.uniform(0.0, 1.0, nodes.size)
    counts = np.full(betas.size, nodes.size, dtype=np.int64)
    alphas = np.linspace(0.1, 60.0, 300)
    r = np.linspace(0.0, 14.0, 3000)
    w = np.exp(-r * r) * r
    return {
        "jv(nu=3.5, 2e5 points)": lambda k: k.jv(3.5, x),
        "target_weighted_sums(400 x 4000)": lambda k: k.target_weighted_sums(10.0, betas, nodes, weights, counts),
        "hankel_sums(300 x 3000)": lambda k: k.hankel_sums(1.0, alphas, r, w),
    }


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = {name: get_backend(name) for name in ("numba", "numpy")}
    print(f"{'case':36s} {'numba [s]':>10s} {'numpy [s]':>10s} {'ratio':>7s} {'max diff':>10s}")
    for label, case in _cases(np.random.default_rng(7)).items():
        results = {}
        for name, k in backends.items():
            case(k)
            results[name] = _best(lambda: case(k), args.repeat)
        (tn, on), (tp, op) = results["numba"], results["numpy"]
        diff = float(np.max(np.abs(on - op)))
        print(f"{label:36s} {tn:10.4f} {tp:10.4f} {tp / tn:7.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
