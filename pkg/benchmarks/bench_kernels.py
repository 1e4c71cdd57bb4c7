"""Benchmark the numba kernels against the numpy/pure-python fallbacks.

Runs both implementations of the two hot kernels regardless of the
PARSET_BACKEND selection and prints timings plus the speedup.

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from parset import _kernels


def timeit(fn, *args, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_min_dist():
    rng = np.random.default_rng(0)
    points = rng.standard_normal((2_000_000, 3))
    base = rng.standard_normal((32, 3))
    t_np, got_np = timeit(_kernels.min_dist_sq_l2_numpy, points, base)
    print(f"min_dist  numpy : {t_np:.3f} s")
    if _kernels._HAVE_NUMBA:
        _kernels._min_dist_sq_l2_numba(points[:10], base)  # compile
        t_nb, got_nb = timeit(_kernels._min_dist_sq_l2_numba, points, base)
        assert np.allclose(got_np, got_nb)
        print(f"min_dist  numba : {t_nb:.3f} s   ({t_np / t_nb:.1f}x)")


def bench_matching():
    rng = np.random.default_rng(1)
    n = 2000
    x = rng.standard_normal((n, 2))
    y = rng.standard_normal((n, 2))
    d2 = ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)
    ok = d2 <= 0.4
    indptr = np.zeros(n + 1, dtype=np.int64)
    cols = []
    for i in range(n):
        row = np.nonzero(ok[i])[0].astype(np.int64)
        indptr[i + 1] = indptr[i] + len(row)
        cols.append(row)
    indices = np.concatenate(cols)
    print(f"matching graph: {n} x {n}, {len(indices)} edges")
    t_py, got_py = timeit(_kernels.hopcroft_karp_numpy, indptr, indices, n, n, repeats=1)
    print(f"matching  python: {t_py:.3f} s  (matched {got_py[0]})")
    if _kernels._HAVE_NUMBA:
        warm_ptr = np.array([0, 1], dtype=np.int64)
        warm_idx = np.array([0], dtype=np.int64)
        _kernels.hopcroft_karp_numba(warm_ptr, warm_idx, 1, 1)  # compile
        t_nb, got_nb = timeit(_kernels.hopcroft_karp_numba, indptr, indices, n, n)
        assert got_nb[0] == got_py[0]
        print(f"matching  numba : {t_nb:.3f} s   ({t_py / t_nb:.1f}x)")


if __name__ == "__main__":
    print(f"selected backend: {_kernels.backend_name()}")
    bench_min_dist()
    bench_matching()
