"""Compare the compiled and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each workload runs under both backends; outputs are checked for agreement
before timings are reported.
"""

import argparse
import time

import numpy as np

from nads import kernels, spaces
from nads import systems as S


def _orbit_workload(steps, points):
    fam = S.periodic_family(spaces.interval(), [S.logistic(4.0), S.identity(), S.tent()])
    ops, params, ends = S.op_table(fam, steps)
    x0 = np.linspace(0.001, 0.999, points)
    return lambda: kernels.iterate(ops, params, ends, x0)


def _hit_workload():
    rng = np.random.default_rng(0)
    traj = rng.uniform(0, 1, size=(200, 4096))
    group = np.repeat(np.arange(32), 128)
    centers = np.linspace(0, 1, 21)
    radii = np.full(21, 0.05)
    return lambda: kernels.ball_hit_index(traj, group, 32, centers, radii, False)


def _pairs_workload():
    rng = np.random.default_rng(1)
    ku = rng.integers(0, 8, size=1024, dtype=np.uint64)
    kv = rng.integers(0, 8, size=1024, dtype=np.uint64)

    def run():
        first = np.zeros((1024, 1024), dtype=np.int32)
        last = np.zeros((1024, 1024), dtype=np.int32)
        for n in range(1, 41):
            kernels.track_pairs(ku, kv, n, first, last)
        return first, last

    return run


def _distance_workload():
    rng = np.random.default_rng(2)
    a = rng.uniform(0, 2 * np.pi, 1500)
    b = rng.uniform(0, 2 * np.pi, 1500)
    return lambda: kernels.pairwise_distance(a, b, True)


WORKLOADS = {
    "iterate (wide)": lambda: _orbit_workload(200, 2000),
    "iterate (long)": lambda: _orbit_workload(20000, 4),
    "ball_hit_index": _hit_workload,
    "track_pairs": _pairs_workload,
    "pairwise_distance": _distance_workload,
}


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.allclose(a, b, rtol=0, atol=1e-12)


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        kernels.use_backend("cython")
    except ImportError:
        print("compiled extension not built; only the python backend is available")
        return
    print(f"{'kernel':20s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, make in WORKLOADS.items():
        fn = make()
        kernels.use_backend("python")
        ref = fn()
        tp = _best(fn, args.repeat)
        kernels.use_backend("cython")
        out = fn()
        tc = _best(fn, args.repeat)
        if not _same(ref, out):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:20s} {tp * 1e3:12.2f} {tc * 1e3:12.2f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
