"""Numba vs NumPy timings for the three hot kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Each numba kernel runs once untimed first so compilation is excluded.
"""

import argparse
import time

import numpy as np

from antibunch import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    zeta = 1.0058592403407787
    tau_grid, mu_grid = np.meshgrid(np.linspace(-3 / zeta, 3 / zeta, 41), np.linspace(-6 * zeta, 6 * zeta, 41))
    tau_cf = rng.uniform(-3, 3, 2_000_000)
    mu_cf = rng.uniform(-6, 6, 2_000_000)
    nu = np.linspace(-30, 30, 6001)
    a = rng.normal(size=nu.size) + 1j * rng.normal(size=nu.size)
    b = rng.normal(size=nu.size) + 1j * rng.normal(size=nu.size)
    taus = rng.uniform(-10, 10, 50)
    return {
        "closed_form (2e6 points)": lambda impl: impl["closed_form"](tau_cf, mu_cf, zeta),
        "oracle (41x41, 40001 nodes)": lambda impl: impl["oracle"](tau_grid.ravel(), mu_grid.ravel(), zeta, 40001),
        "delayed_overlap (6001 x 50 delays)": lambda impl: impl["delayed_overlap"](a, b, nu, taus, 0.01, 1.0),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    impls = {"numpy": {"closed_form": _kernels.closed_form_numpy, "oracle": _kernels.oracle_numpy,
                       "delayed_overlap": _kernels.delayed_overlap_numpy}}
    if _kernels.NUMBA_AVAILABLE:
        impls["numba"] = {"closed_form": _kernels.closed_form_numba, "oracle": _kernels.oracle_numba,
                          "delayed_overlap": _kernels.delayed_overlap_numba}

    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, run in cases(rng).items():
        row = {}
        for backend, impl in impls.items():
            if backend == "numba":
                run(impl)
            row[backend] = best_of(lambda: run(impl), args.repeat)
        nb = row.get("numba", float("nan"))
        print(f"{name:38s} {row['numpy']:10.4f} {nb:10.4f} {row['numpy'] / nb:8.1f}x")


if __name__ == "__main__":
    main()
