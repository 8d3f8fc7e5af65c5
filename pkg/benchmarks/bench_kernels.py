"""Benchmark the numba kernels against the pure-numpy fallback.

Times the hot per-step operations (full acoustic RHS, advective tendency,
forward-backward substeps) on a few grid sizes and prints the speedup of
the numba backend.  Usage:

    python benchmarks/bench_kernels.py [--sizes 40 80 160] [--repeat 300]
"""
import argparse
import time

import numpy as np

from pitwave.kernels import numpy_backend

try:
    from pitwave.kernels import numba_backend
except ImportError:
    numba_backend = None

from pitwave.mesh import SolidBodyRotation, build_grid, face_normal_velocities, init_cosine_bump


def bench(fn, args, repeat):
    fn(*args)  # warm-up / jit compile
    tic = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - tic) / repeat


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[40, 80, 160])
    parser.add_argument("--repeat", type=int, default=300)
    args = parser.parse_args(argv)

    backends = [numpy_backend] + ([numba_backend] if numba_backend else [])
    if numba_backend is None:
        print("numba not importable; timing the numpy backend only")

    header = f"{'kernel':<22}{'grid':>10}" + "".join(f"{b.BACKEND_NAME:>12}" for b in backends)
    if numba_backend:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))

    for n in args.sizes:
        g = build_grid(n, n, 1.0, 1.0)
        q = init_cosine_bump(g, 0.5, 0.65)
        u, v, p = q, 0.3 * q, 0.1 * q
        ux, vy = face_normal_velocities(SolidBodyRotation(np.pi), g)
        cases = {
            "acoustic_rhs(o6)": lambda b: (b.acoustic_rhs, (u, v, p, ux, vy, g.dx, g.dy, 30.0, 6, 0.02, 0.02)),
            "advective_tendency(o5)": lambda b: (b.advective_tendency, (q, ux, vy, g.dx, g.dy, 5)),
            "fb_substeps(n=4)": lambda b: (b.fb_substeps, (u, v, p, 0 * u, 0 * u, 0 * u, 1e-4, 4, g.dx, g.dy, 30.0, 0.05, 0.05)),
        }
        for name, make in cases.items():
            times = [bench(*make(b), args.repeat) for b in backends]
            row = f"{name:<22}{n:>7}^2 " + "".join(f"{t * 1e6:>10.1f}us" for t in times)
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)
    print("\nbackend selection at import time: PITWAVE_KERNELS=auto|numba|numpy")


if __name__ == "__main__":
    main()
