"""Time the numba kernels against their pure-numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 4096]

Both backends are imported in one process, so the choice made by
FRACCALC_BACKEND does not matter here.  Each kernel is called once before
timing so numba compilation is excluded.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from fraccalc import kernels


def cases(n: int):
    rng = np.random.default_rng(0)
    xs = rng.uniform(-5.0, 20.0, 256)
    values = rng.uniform(-1.0, 1.0, n)
    nodes = np.linspace(0.0, 1.0, n + 1)
    g = np.sin(nodes)
    z = np.linspace(-9.0, 4.0, 256)
    return [
        ("gamma (256 scalars)", lambda impl: [impl.gamma(float(x)) for x in xs]),
        (f"gl_weights (n={n})", lambda impl: impl.gl_weights(0.5, n)),
        (f"gl_sum (n={n})", lambda impl: impl.gl_sum(values, 0.5)),
        (f"product_weights (n={n})", lambda impl: impl.product_weights(nodes, 1.0, 0.5)),
        (f"frac_integral_nodes (n={n})", lambda impl: impl.frac_integral_nodes(g, 1.0 / n, 0.5)),
        ("ml_series (256 arguments)", lambda impl: impl.ml_series(0.8, 1.2, z, 1e-16, 10_000)),
    ]


def best_time(fn, repeat: int) -> float:
    number = 1
    # grow the loop count until one batch takes about 20 ms
    while timeit.timeit(fn, number=number) < 0.02 and number < 10_000:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--size", type=int, default=4096)
    args = parser.parse_args(argv)
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>9s}")
    for name, call in cases(args.size):
        call(kernels.numba_impl)
        call(kernels.numpy_impl)
        t_numba = best_time(lambda: call(kernels.numba_impl), args.repeat)
        t_numpy = best_time(lambda: call(kernels.numpy_impl), args.repeat)
        print(f"{name:32s} {1e3 * t_numba:12.4f} {1e3 * t_numpy:12.4f} {t_numpy / t_numba:9.1f}x")


if __name__ == "__main__":
    main()
