"""Timing comparison of the compiled and numpy kernel backends.

Run as: python3 benchmarks/bench_kernels.py

Workloads mirror real call sites: Horner evaluation of long q-expansions at
quadrature nodes (forms.evaluate_many) and coefficient convolutions of
typical Dirichlet-cutoff length (the shell-sum cascade in lfun).
"""

import time

import numpy as np

from moditer import _kernels_py

try:
    from moditer import _kernels
except ImportError:
    _kernels = None


def bench(fn, *args, repeat=7):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    cases = []

    for order, npts in ((200, 1024), (2000, 4096)):
        coeffs = rng.standard_normal(order + 1) + 1j * rng.standard_normal(order + 1)
        ws = 0.9 * np.exp(2j * np.pi * rng.uniform(0, 1, npts)) * rng.uniform(0.1, 1, npts)
        cases.append((f"horner order={order} points={npts}", "horner_many", (coeffs, ws)))

    for n, m in ((2000, 2000), (6000, 64)):
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        cases.append((f"conv {n}x{m}", "conv_complex", (a, b)))

    print(f"{'workload':34s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, fname, args in cases:
        t_py = bench(getattr(_kernels_py, fname), *args)
        if _kernels is None:
            print(f"{label:34s} {t_py * 1e3:9.2f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        t_c = bench(getattr(_kernels, fname), *args)
        out_py = getattr(_kernels_py, fname)(*args)
        out_c = getattr(_kernels, fname)(*args)
        tag = "" if np.array_equal(out_py, out_c) else "  (MISMATCH)"
        print(f"{label:34s} {t_py * 1e3:9.2f}ms {t_c * 1e3:9.2f}ms {t_py / t_c:7.1f}x{tag}")


if __name__ == "__main__":
    main()
