"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--scale 1.0]
"""
import argparse
import timeit

import numpy as np

from hyperbolic import _kernels_py

try:
    from hyperbolic import _kernels
except ImportError:
    _kernels = None


def cases(scale):
    rng = np.random.default_rng(0)
    n_b = int(20_000 * scale)
    nu = rng.uniform(-20, 20, n_b)
    x = np.geomspace(1e-3, 200, n_b)
    z = rng.standard_normal(int(1_000_000 * scale))
    eps = rng.standard_normal(int(1_000_000 * scale))
    return {
        f"log_bessel_k ({n_b} points)": lambda k: k.log_bessel_k(nu, x),
        f"hyp_diffusion ({z.size} steps)":
            lambda k: k.hyp_diffusion(0.0, z, 100, 1.5, 0.4, 0.8, 0.1, 1.0, 1e-3),
        f"ar1_filter ({eps.size} steps)": lambda k: k.ar1_filter(0.95, 0.0, eps),
    }


def best_time(fn, module, repeat):
    return min(timeit.repeat(lambda: fn(module), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions, best is kept")
    ap.add_argument("--scale", type=float, default=1.0, help="multiplier on problem sizes")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; only the pure-Python timings are shown")
    print(f"{'kernel':<36}{'python [s]':>12}{'cython [s]':>12}{'speed-up':>10}")
    for name, fn in cases(args.scale).items():
        tp = best_time(fn, _kernels_py, args.repeat)
        if _kernels is None:
            print(f"{name:<36}{tp:>12.4f}{'-':>12}{'-':>10}")
            continue
        tc = best_time(fn, _kernels, args.repeat)
        print(f"{name:<36}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
