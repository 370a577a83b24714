#!/usr/bin/env python3
"""Race the numba kernels against their numpy/python fallbacks.

Builds random CSR adjacencies at a few sizes, checks both flavours agree,
and prints per-kernel timings.  Run from the repo root:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --n 5000 --avg-degree 20 --repeat 5
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from polmon import _kernels


def random_csr(rng: np.random.Generator, n: int, avg_degree: float):
    p = min(1.0, avg_degree / max(1, n - 1))
    rows, cols = [], []
    block = rng.random((n, n)) < p
    iu = np.triu_indices(n, k=1)
    mask = block[iu]
    u = iu[0][mask]
    v = iu[1][mask]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    order = np.lexsort((cols, rows))
    indices = cols[order].astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return indptr, indices


def timed(fn, *args, repeat: int):
    best = np.inf
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=3000)
    parser.add_argument("--avg-degree", type=float, default=12.0)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba backend unavailable (POLMON_NUMBA=0 or import failure); "
              "nothing to race")
        return

    rng = np.random.default_rng(args.seed)
    indptr, indices = random_csr(rng, args.n, args.avg_degree)
    n = args.n
    m = len(indices) // 2
    print(f"graph: n={n}, m={m}, backend flag={_kernels.backend()}")

    x = rng.normal(size=n)
    s = rng.choice([-1.0, 0.0, 1.0], size=n)
    weights = np.ones(len(indices))
    k_arr = np.diff(indptr).astype(np.float64)

    races = []

    races.append(("adj_matvec",
                  lambda: _kernels.adj_matvec_py(indptr, indices, x),
                  lambda: _kernels.adj_matvec_jit(indptr, indices, x),
                  lambda a, b: np.max(np.abs(a - b))))

    races.append(("fj_fixed_point",
                  lambda: _kernels.fj_fixed_point_py(indptr, indices, s,
                                                     1e-10, 10 * n + 1000),
                  lambda: _kernels.fj_fixed_point_jit(indptr, indices, s,
                                                      1e-10, 10 * n + 1000),
                  lambda a, b: np.max(np.abs(a[0] - b[0]))))

    races.append(("power_iteration",
                  lambda: _kernels.power_iteration_py(indptr, indices,
                                                      1e-10, 100_000),
                  lambda: _kernels.power_iteration_jit(indptr, indices,
                                                       1e-10, 100_000),
                  lambda a, b: abs(a[0] - b[0])))

    k_sel = min(100, n)
    lam, u, *_ = _kernels.power_iteration_jit(indptr, indices, 1e-10, 100_000)
    races.append(("netshield_greedy",
                  lambda: _kernels.netshield_greedy_py(indptr, indices, lam,
                                                       u, k_sel),
                  lambda: _kernels.netshield_greedy_jit(indptr, indices, lam,
                                                        u, k_sel),
                  lambda a, b: float(np.max(np.abs(a[0] - b[0])))))

    def sweep(fn):
        comm = np.arange(n, dtype=np.int64)
        comm_tot = k_arr.copy()
        fn(indptr, indices, weights, k_arr, comm, comm_tot, float(m),
           1.0, 1e-12)
        return comm

    races.append(("louvain_sweep",
                  lambda: sweep(_kernels.louvain_sweep_py),
                  lambda: sweep(_kernels.louvain_sweep_jit),
                  lambda a, b: float(np.max(np.abs(a - b)))))

    # compile everything outside the timed region
    for _, _, jit_fn, _ in races:
        jit_fn()

    header = f"{'kernel':<18} {'numpy/python':>14} {'numba':>12} {'speedup':>9}  agree"
    print(header)
    print("-" * len(header))
    for name, py_fn, jit_fn, diff in races:
        t_py, r_py = timed(py_fn, repeat=args.repeat)
        t_jit, r_jit = timed(jit_fn, repeat=args.repeat)
        gap = diff(r_py, r_jit)
        print(f"{name:<18} {t_py * 1e3:>12.2f}ms {t_jit * 1e3:>10.2f}ms "
              f"{t_py / t_jit:>8.1f}x  max|diff|={gap:.1e}")


if __name__ == "__main__":
    main()
