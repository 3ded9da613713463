"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 1000 10000] [--repeat 5]

Prints the median wall time per call for each backend, the speedup and the
largest absolute difference between the two results.
"""
import argparse
import statistics
import time

import numpy as np

from monotone import _pykernels, kernels

try:
    from monotone import _ckernels
except ImportError:
    _ckernels = None


def _graph(m, n, rng):
    # samples of the identity graph plus noise, so the data is monotone-ish
    Y = rng.uniform(-2, 2, size=(m, n))
    return Y, Y + 0.01 * rng.standard_normal((m, n))


def _cases(m, n, rng):
    Y, Ys = _graph(m, n, rng)
    x, xs = rng.standard_normal(n), rng.standard_normal(n)
    k = min(m, 2000)
    A = rng.standard_normal((64, n))
    b = np.abs(rng.standard_normal(64)) + 0.1
    p = 5 * rng.standard_normal(n)
    return {
        "slope_sup": lambda impl: kernels.slope_sup(Y, Ys, x, xs, impl=impl),
        "related_min": lambda impl: kernels.related_min(Y, Ys, x, xs, impl=impl),
        "enlargement_min": lambda impl: kernels.enlargement_min(Y, Ys, x, xs, 0.5, True, impl=impl),
        "pairwise_min": lambda impl: kernels.pairwise_min(Y[:k], Ys[:k], impl=impl),
        "dykstra_halfspaces": lambda impl: kernels.dykstra_halfspaces(A, b, p, impl=impl)[0],
    }


def _time(fn, repeat):
    out = fn()
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts), out


def _diff(a, b):
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    fin = np.isfinite(a) & np.isfinite(b)
    if not np.array_equal(np.isfinite(a), np.isfinite(b)):
        return float("inf")
    return float(np.max(np.abs(a[fin] - b[fin]), initial=0.0))


def _flat(r):
    if isinstance(r, tuple):
        return np.concatenate([np.atleast_1d(np.asarray(t, dtype=float)) for t in r])
    return r


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 10000, 100000])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels unavailable; timing the numpy fallback only")
    print(f"{'kernel':<20}{'m':>8}{'python ms':>12}{'cython ms':>12}{'speedup':>9}{'max diff':>11}")
    for m in args.sizes:
        rng = np.random.default_rng(args.seed)
        for name, fn in _cases(m, args.dim, rng).items():
            tp, rp = _time(lambda: fn(_pykernels), args.repeat)
            if _ckernels is None:
                print(f"{name:<20}{m:>8}{1e3 * tp:>12.3f}{'-':>12}{'-':>9}{'-':>11}")
                continue
            tc, rc = _time(lambda: fn(_ckernels), args.repeat)
            d = _diff(_flat(rp), _flat(rc))
            print(f"{name:<20}{m:>8}{1e3 * tp:>12.3f}{1e3 * tc:>12.3f}{tp / tc:>9.1f}{d:>11.2e}")


if __name__ == "__main__":
    main()
