"""Timing comparison of the numpy and numba kernel paths.

Run:  python benchmarks/bench_kernels.py [--repeat N]

Times the two hot kernels (direct mode summation and the pair-wise density
sum) on representative problem sizes, best-of-N wall time. Set
KG_LAB_NO_NUMBA=1 to check what the pure-numpy fallback costs by itself.
"""
import argparse
import time

import numpy as np

from kg_lab import _kernels


def bench(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def make_mode_sum_case(rng, n_modes, n_x):
    coeffs = rng.standard_normal(n_modes) + 1j * rng.standard_normal(n_modes)
    ks = rng.uniform(-30.0, 30.0, n_modes)
    omegas = np.sqrt(1.0 + ks**2)
    x = np.linspace(-200.0, 200.0, n_x)
    return _kernels._as_kernel_args(coeffs, ks, omegas, x, 2.5)


def row(label, t_numpy, t_numba):
    if t_numba is None:
        print(f"{label:<34} numpy {t_numpy * 1e3:8.2f} ms   numba       --")
    else:
        print(f"{label:<34} numpy {t_numpy * 1e3:8.2f} ms   "
              f"numba {t_numba * 1e3:8.2f} ms   speedup {t_numpy / t_numba:5.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="best-of-N (default 5)")
    args = parser.parse_args()
    rng = np.random.default_rng(7)

    print(f"active backend: {_kernels.backend_name()}")
    cases = [
        ("mode_sum, 4096 modes x 4096 pts", _kernels.mode_sum_numpy,
         _kernels.mode_sum_jit, make_mode_sum_case(rng, 4096, 4096)),
        ("mode_sum, 256 modes x 8192 pts", _kernels.mode_sum_numpy,
         _kernels.mode_sum_jit, make_mode_sum_case(rng, 256, 8192)),
        ("pair_density, 8 modes x 4096 pts", _kernels.pair_density_numpy,
         _kernels.pair_density_jit, make_mode_sum_case(rng, 8, 4096)),
        ("pair_density, 64 modes x 2048 pts", _kernels.pair_density_numpy,
         _kernels.pair_density_jit, make_mode_sum_case(rng, 64, 2048)),
    ]
    for label, numpy_fn, jit_fn, case in cases:
        if jit_fn is not None:
            jit_fn(*case)  # warm-up pays the compile cost outside the timing
            # correctness guard: both paths must agree before timing means anything
            ref = numpy_fn(*case)
            scale = float(np.max(np.abs(ref)))
            np.testing.assert_allclose(jit_fn(*case), ref, rtol=1e-10,
                                       atol=1e-12 * scale)
        t_numpy = bench(numpy_fn, case, args.repeat)
        t_numba = bench(jit_fn, case, args.repeat) if jit_fn is not None else None
        row(label, t_numpy, t_numba)


if __name__ == "__main__":
    main()
