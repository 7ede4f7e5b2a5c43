"""Backend selection for the hot loops: numba JIT with a numpy fallback.

The environment variable HYPOHEAT_NUMBA picks the path: "0" forces the pure
numpy implementation, anything else (or unset) uses numba when importable.
Both paths produce identical results; benchmarks/bench_backends.py compares
their speed.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - environment dependent
    numba = None
    _HAVE_NUMBA = False


def use_numba():
    if os.environ.get("HYPOHEAT_NUMBA", "1") == "0":
        return False
    return _HAVE_NUMBA


def _pde_step_numpy(phi, xs, ys, dt, dx, dy, dz):
    """One explicit-Euler step of dphi/dt = (L1^2 + L2^2) phi on a 3D grid.

    L1 = dx - (y/2) dz, L2 = dy + (x/2) dz, so
    L1^2 + L2^2 = dxx + dyy + ((x^2+y^2)/4) dzz - y dxdz + x dydz.
    Dirichlet zero boundary; the stencil telescopes, conserving grid mass.
    """
    c = phi[1:-1, 1:-1, 1:-1]
    lap = np.zeros_like(c)
    lap += (phi[2:, 1:-1, 1:-1] - 2 * c + phi[:-2, 1:-1, 1:-1]) / dx ** 2
    lap += (phi[1:-1, 2:, 1:-1] - 2 * c + phi[1:-1, :-2, 1:-1]) / dy ** 2
    x = xs[1:-1][:, None, None]
    y = ys[1:-1][None, :, None]
    lap += ((x * x + y * y) / 4.0) * (
        phi[1:-1, 1:-1, 2:] - 2 * c + phi[1:-1, 1:-1, :-2]) / dz ** 2
    cross_xz = (phi[2:, 1:-1, 2:] - phi[2:, 1:-1, :-2]
                - phi[:-2, 1:-1, 2:] + phi[:-2, 1:-1, :-2]) / (4 * dx * dz)
    cross_yz = (phi[1:-1, 2:, 2:] - phi[1:-1, 2:, :-2]
                - phi[1:-1, :-2, 2:] + phi[1:-1, :-2, :-2]) / (4 * dy * dz)
    lap += -y * cross_xz + x * cross_yz
    out = phi.copy()
    out[1:-1, 1:-1, 1:-1] = c + dt * lap
    return out


if _HAVE_NUMBA:
    @numba.njit(cache=True)
    def _pde_step_numba(phi, xs, ys, dt, dx, dy, dz):  # pragma: no cover - jit
        nx, ny, nz = phi.shape
        out = phi.copy()
        for i in range(1, nx - 1):
            x = xs[i]
            for j in range(1, ny - 1):
                y = ys[j]
                cz = (x * x + y * y) / 4.0
                for k in range(1, nz - 1):
                    lap = ((phi[i + 1, j, k] - 2 * phi[i, j, k] + phi[i - 1, j, k]) / dx ** 2
                           + (phi[i, j + 1, k] - 2 * phi[i, j, k] + phi[i, j - 1, k]) / dy ** 2
                           + cz * (phi[i, j, k + 1] - 2 * phi[i, j, k] + phi[i, j, k - 1]) / dz ** 2)
                    cxz = (phi[i + 1, j, k + 1] - phi[i + 1, j, k - 1]
                           - phi[i - 1, j, k + 1] + phi[i - 1, j, k - 1]) / (4 * dx * dz)
                    cyz = (phi[i, j + 1, k + 1] - phi[i, j + 1, k - 1]
                           - phi[i, j - 1, k + 1] + phi[i, j - 1, k - 1]) / (4 * dy * dz)
                    out[i, j, k] = phi[i, j, k] + dt * (lap - y * cxz + x * cyz)
        return out
else:  # pragma: no cover - environment dependent
    _pde_step_numba = None


def pde_step(phi, xs, ys, dt, dx, dy, dz, backend=None):
    if backend is None:
        backend = "numba" if use_numba() else "numpy"
    if backend == "numba" and _pde_step_numba is not None:
        return _pde_step_numba(phi, xs, ys, dt, dx, dy, dz)
    return _pde_step_numpy(phi, xs, ys, dt, dx, dy, dz)
