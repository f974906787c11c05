#!/usr/bin/env python3
"""Timing comparison of the oracle hot kernels: numba @njit vs pure numpy.

Covers the two sequential inner loops behind oracle_matrix_element (chained
small complex matrix products) and oracle_state_norm (one-slot contraction
swept across a lattice state).  Run:

    python3 benchmarks/bench_kernels.py

The numba rows are skipped when numba is not importable.  At runtime the
package picks the backend automatically; set QSCOCYCLE_BACKEND=numpy to force
the fallback.
"""

import time

import numpy as np

from qscocycle import _kernels


def timeit(fn, *args, repeats=7):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_element_chain(rng):
    print("element_chain: sequential product of N small complex matrices")
    print(f"{'dim_h':>6} {'N':>6} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for dh, n in ((2, 1024), (4, 4096), (8, 4096), (4, 16384)):
        mats = rng.standard_normal((6, dh, dh)) + 1j * rng.standard_normal((6, dh, dh))
        mats *= 0.4 / dh
        idx = rng.integers(0, 6, size=n)
        t_np = timeit(_kernels.element_chain_numpy, mats, idx)
        if _kernels._HAVE_NUMBA:
            mats_c = np.ascontiguousarray(mats)
            idx_c = np.ascontiguousarray(idx, dtype=np.int64)
            _kernels._element_chain_numba(mats_c, idx_c)  # compile
            t_nb = timeit(_kernels._element_chain_numba, mats_c, idx_c)
            print(f"{dh:>6} {n:>6} {t_np*1e3:>10.3f}ms {t_nb*1e3:>10.3f}ms "
                  f"{t_np/t_nb:>7.1f}x")
        else:
            print(f"{dh:>6} {n:>6} {t_np*1e3:>10.3f}ms {'n/a':>12} {'':>8}")


def bench_slot_apply(rng):
    print()
    print("slot_apply: one-slot contraction applied across the lattice state")
    print(f"{'dim_h':>6} {'slots':>6} {'state':>9} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for dh, m, n in ((2, 2, 16), (2, 3, 12), (4, 2, 14)):
        size = dh * m**n
        state = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        g4 = rng.standard_normal((dh, m, dh, m)) + 1j * rng.standard_normal((dh, m, dh, m))
        g4 *= 0.5 / (dh * m)
        t_np = timeit(_kernels.slot_apply_numpy, state, g4, dh, m, n, repeats=3)
        if _kernels._HAVE_NUMBA:
            state_c = np.ascontiguousarray(state)
            g4_c = np.ascontiguousarray(g4)
            _kernels._slot_apply_numba(state_c, g4_c, dh, m, n)  # compile
            t_nb = timeit(_kernels._slot_apply_numba, state_c, g4_c, dh, m, n, repeats=3)
            print(f"{dh:>6} {n:>6} {size:>9} {t_np*1e3:>10.2f}ms {t_nb*1e3:>10.2f}ms "
                  f"{t_np/t_nb:>7.1f}x")
        else:
            print(f"{dh:>6} {n:>6} {size:>9} {t_np*1e3:>10.2f}ms {'n/a':>12} {'':>8}")


def main():
    print(f"active backend: {_kernels.backend_name()}")
    rng = np.random.default_rng(0)
    bench_element_chain(rng)
    bench_slot_apply(rng)


if __name__ == "__main__":
    main()
