"""Time Nystrom matrix assembly with the compiled core and the NumPy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--sizes 25 50 100] [--repeat 5]``
"""

import argparse
import time

import numpy as np

from plasmonshape import geometry, kernels
from plasmonshape.materials import MaterialConfig


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[25, 50, 100])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    mat = MaterialConfig(mu_c=-1 + 0.004j)
    ks = [mat.k_m, mat.k_c]
    shape = geometry.peanut()
    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    if len(backends) == 1:
        print("compiled core not built; timing the NumPy fallback only")

    print(f"{'n':>5} {'nodes':>6} " + " ".join(f"{b + ' [ms]':>15}" for b in backends) + f" {'speedup':>8} {'max diff':>9}")
    for n in args.sizes:
        grid = geometry.discretize(shape, n)
        kernels.layer_matrices(ks, grid, backend=backends[-1])  # warm caches
        row = {b: best_time(lambda b=b: kernels.layer_matrices(ks, grid, backend=b), args.repeat) for b in backends}
        if "compiled" in row:
            Sp, Kp = kernels.layer_matrices(ks, grid, backend="python")
            Sc, Kc = kernels.layer_matrices(ks, grid, backend="compiled")
            diff = max(np.max(np.abs(Sp - Sc)), np.max(np.abs(Kp - Kc)))
            speed = f"{row['python'] / row['compiled']:8.1f}"
            diff = f"{diff:9.1e}"
        else:
            speed, diff = f"{'-':>8}", f"{'-':>9}"
        times = " ".join(f"{1e3 * row[b]:15.2f}" for b in backends)
        print(f"{n:5d} {2 * n:6d} {times} {speed} {diff}")


if __name__ == "__main__":
    main()
