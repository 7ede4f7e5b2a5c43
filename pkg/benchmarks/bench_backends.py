"""Timing comparison of the finite-difference hot kernel backends.

Runs the same explicit-Euler sub-Laplacian step with the numba-compiled
stencil and the pure-numpy slicing fallback and reports steps/second.

    python3 benchmarks/bench_backends.py [n_grid] [n_steps]
"""

import sys
import time

import numpy as np

from hypoheat import accel


def bench(backend, n_grid=81, n_steps=50):
    xs = np.linspace(-3.0, 3.0, n_grid)
    h = xs[1] - xs[0]
    X, Y, Z = np.meshgrid(xs, xs, xs, indexing="ij")
    phi = np.exp(-(X * X + Y * Y + Z * Z) / 0.1)
    coef = 2.0 / h ** 2 * (2.0 + 0.5 * 9.0) + 6.0 / h ** 2
    dt = 0.5 / coef
    # warm-up (JIT compilation for the numba path)
    accel.pde_step(phi, xs, xs, dt, h, h, h, backend=backend)
    t0 = time.perf_counter()
    out = phi
    for _ in range(n_steps):
        out = accel.pde_step(out, xs, xs, dt, h, h, h, backend=backend)
    dtw = time.perf_counter() - t0
    return dtw / n_steps, out


def main():
    n_grid = int(sys.argv[1]) if len(sys.argv) > 1 else 81
    n_steps = int(sys.argv[2]) if len(sys.argv) > 2 else 50
    per_np, out_np = bench("numpy", n_grid, n_steps)
    print(f"numpy : {per_np * 1e3:8.2f} ms/step "
          f"({n_grid}^3 grid, {n_steps} steps)")
    try:
        per_nb, out_nb = bench("numba", n_grid, n_steps)
    except ImportError:
        print("numba : not installed (pip install hypoheat[accel])")
        return
    print(f"numba : {per_nb * 1e3:8.2f} ms/step "
          f"({n_grid}^3 grid, {n_steps} steps)")
    print(f"speedup: {per_np / per_nb:.2f}x, "
          f"max |difference| = {np.max(np.abs(out_np - out_nb)):.2e}")


if __name__ == "__main__":
    main()
